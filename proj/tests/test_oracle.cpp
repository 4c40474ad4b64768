#include <cmath>
#include <random>

#include "doctest.h"
#include "twrn/oracle.hpp"
#include "twrn/runner.hpp"

using namespace twrn;
using doctest::Approx;

TEST_CASE("grid minimum at zero multipliers is the origin") {
  for (AllocatorId id : kAllAllocators) {
    const GridResult g = pointwise_grid_min(id, {{0, 0}, {1.5, 0.7}}, {});
    CHECK(g.value == 0.0);
    CHECK(g.point[0] == 0.0);
    CHECK(g.point[1] == 0.0);
  }
}

TEST_CASE("grid agrees with the two-stream superposition optimum") {
  const OracleInput in{{2 / kLog2e, 3 / kLog2e}, {2, 1}};
  const GridResult g = pointwise_grid_min(AllocatorId::Superposition, in, {});
  CHECK(std::abs(g.value - closed_form(AllocatorId::Superposition, in).lagrangian) <= 1e-3);
}

TEST_CASE("refining the grid changes the minimum by less than the tolerance") {
  const OracleInput in{{2.2 / kLog2e, 3.1 / kLog2e}, {1.7, 0.6}};
  for (AllocatorId id : {AllocatorId::Superposition, AllocatorId::Mac, AllocatorId::Codeword}) {
    GridSpec coarse{100, {}, 0};
    GridSpec fine{400, {}, 0};
    const double a = pointwise_grid_min(id, in, coarse).value;
    const double b = pointwise_grid_min(id, in, fine).value;
    CHECK(b <= a);
    CHECK(a - b < 1e-3);
  }
}

TEST_CASE("closed forms match the grid on random inputs") {
  VerifyOptions opt;
  opt.oracle_trials = 150;
  for (AllocatorId id : kAllAllocators) {
    const CheckResult c = verify_allocator(id, opt);
    INFO(c.name << " worst " << c.worst);
    CHECK(c.passed());
  }
}

TEST_CASE("static strategy grid") {
  // A vanishing requirement costs vanishing energy.
  double last = INFINITY;
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const double e = static_strategy_grid(Strategy::DncSup, {0, eps}, {1, 1, 1, 1}).energy;
    CHECK(e < last);
    last = e;
  }
  CHECK(last < 1e-2);

  // Symmetric PNC-Sup has no excess uplink mode at all.
  const StaticGridResult sym = static_strategy_grid(Strategy::PncSup, {0.5, 0.5}, {1, 1, 1, 1});
  CHECK(sym.fractions.size() == 2);

  // One-axis DNC-Sup on unit gains against a direct scan.
  const StaticGridResult r = static_strategy_grid(Strategy::DncSup, {0.3, 0.6}, {1, 1, 1, 1});
  double best = INFINITY;
  for (int i = 1; i < 100000; ++i) {
    const double f = i / 100000.0, d = 1 - f;
    const double up = f * (std::exp2(0.3 / f) - 1 + std::exp2(0.3 / f) * (std::exp2(0.6 / f) - 1));
    const double down = d * (std::exp2(0.6 / d) - 1);
    best = std::min(best, up + down);
  }
  CHECK(r.energy == Approx(best).epsilon(1e-6));
}

TEST_CASE("Lemma 3 examples") {
  const LemmaCheck eq = lemma3_check({1, 1, 1, 1}, 0.25, 0.25, 1, 1);
  CHECK(eq.e_reference == Approx(0.5));
  CHECK(eq.e_superposed == Approx(0.5));
  CHECK(eq.holds);

  const LemmaCheck strict = lemma3_check({1, 1, 2, 1}, 0.25, 0.25, 2, 1);
  CHECK(strict.e_reference == Approx(0.875));
  CHECK(strict.e_superposed == Approx(std::sqrt(0.5)));
  CHECK(strict.holds);

  const CheckResult sweep = verify_lemma3(7, 20000);
  CHECK(sweep.passed());
}

TEST_CASE("Lemma 4 cases as constructed in the proof") {
  const LemmaCheck c1 = lemma4_check(2, 1, 1.5, 1);
  CHECK(c1.case_index == 1);
  CHECK(c1.e_reference == Approx(std::sqrt(2) - 0.5 + 1));
  CHECK(c1.e_superposed == Approx(std::sqrt(2)));
  CHECK(c1.holds);

  const LemmaCheck c2 = lemma4_check(2, 1, 0.5, 1);
  CHECK(c2.case_index == 2);
  CHECK(c2.e_superposed == Approx(std::sqrt(2) - 1));
  CHECK(c2.holds);

  const LemmaCheck c3 = lemma4_check(1, 2, 1, 0.5);
  CHECK(c3.case_index == 3);
  CHECK(c3.e_superposed == Approx(1.0));
  CHECK(c3.holds);

  const LemmaCheck zero = lemma4_check(1, 1, 0, 0);
  CHECK(zero.e_reference == 0.0);
  CHECK(zero.e_superposed == 0.0);
  CHECK(zero.holds);

  // Case iv sends R62 as one common stream over the weaker g_r1, which can
  // cost more than the two separate streams.
  const LemmaCheck c4 = lemma4_check(1, 2, 0.5, 1);
  CHECK(c4.case_index == 4);
  CHECK(c4.e_superposed == Approx(1.0));
  CHECK(c4.e_reference == Approx(std::sqrt(2) - 1 + 0.5));
  CHECK_FALSE(c4.holds);
}
