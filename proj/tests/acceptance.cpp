// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "twrn/config.hpp"
#include "twrn/runner.hpp"

using namespace twrn;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& title, const std::function<Verdict()>& run) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = run();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("%s [%d] %s (%.1f s): %s\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), secs,
              v.detail.c_str());
  std::fflush(stdout);
}

std::string num(double v, const char* f = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

RunConfig config(const std::string& name) {
  return load_run_config(std::string(TWRN_SOURCE_DIR) + "/configs/" + name);
}

// Energy per (strategy, point index) of a converged sweep.
using Table = std::map<std::string, std::vector<double>>;

Table table_of(const SweepResult& r) {
  Table t;
  for (const auto& row : r.rows) t[row.strategy].push_back(row.converged ? row.solution.total_energy : NAN);
  return t;
}

std::vector<const SweepRow*> all_rows;  // every solve made by the figure runs
std::vector<SweepResult> kept;

const SweepResult& keep(SweepResult r) {
  kept.push_back(std::move(r));
  return kept.back();
}

double tol(const SolverConfig& cfg, double e) { return energy_tolerance(cfg, e); }

std::string timed(double secs, double limit) {
  return "runtime " + num(secs, "%.1f") + " s (limit " + num(limit, "%.0f") + " s)";
}

}  // namespace

int main() {
  kept.reserve(8);
  const VerifyOptions defaults;

  report(1, "Lemma 3 sweep, 1e5 tuples", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const CheckResult c = verify_lemma3(defaults.master_seed + 3, 100000);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return Verdict{c.passed() && s < 10, std::to_string(c.failures) + " violations, worst slack " +
                                             num(c.worst, "%.3e") + ", " + timed(s, 10)};
  });

  report(2, "Lemma 4 sweep, 1e5 tuples", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const CheckResult c = verify_lemma4(defaults.master_seed + 4, 100000);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return Verdict{c.passed() && s < 10, std::to_string(c.failures) + " violations, worst excess " +
                                             num(c.worst, "%.3e") + "; " + c.detail + " " + timed(s, 10)};
  });

  report(3, "closed-form allocators vs 200x200 grid, 1e3 inputs each", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (AllocatorId id : {AllocatorId::P2p, AllocatorId::PncUplink, AllocatorId::Superposition,
                           AllocatorId::Mac, AllocatorId::Codeword}) {
      const CheckResult c = verify_allocator(id, defaults);
      ok = ok && c.passed();
      detail += std::string(to_string(id)) + " worst " + num(c.worst, "%.2e") + " (" +
                std::to_string(c.failures) + " over); ";
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return Verdict{ok && s < 120, detail + timed(s, 120)};
  });

  report(4, "static-channel solver vs grid, 6-case matrix", [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const CheckResult c = verify_static_matrix(defaults);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return Verdict{c.passed() && s < 60, "worst relative gap " + num(c.worst, "%.2e") + "; " +
                                             c.detail + " " + timed(s, 60)};
  });

  // Criterion 10 runs Fig. 2 twice; criterion 5 reads the first run.
  const RunConfig fig2 = config("fig2.cfg");
  const SweepResult* fig2_run = nullptr;
  std::string fig2_bytes[2];
  double fig2_secs = 0;
  for (int k = 0; k < 2; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const SweepResult& r = keep(run_sweep(fig2));
    if (k == 0) {
      fig2_run = &r;
      fig2_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    const std::string path = "acceptance_fig2_run" + std::to_string(k + 1) + ".csv";
    {
      std::ofstream out(path, std::ios::binary);
      write_csv(out, r);
    }
    std::ifstream in(path, std::ios::binary);
    fig2_bytes[k].assign(std::istreambuf_iterator<char>(in), {});
  }

  report(5, "Fig. 2 orderings and PNC/DNC crossover", [&] {
    const Table t = table_of(*fig2_run);
    const auto& lam = fig2.sweep;
    const auto& pnc = t.at("PNC_SUP");
    const auto& dnc = t.at("DNC_SUP");
    const auto& cw = t.at("CW_SUP");
    const auto& popt = t.at("POPT");
    bool a = true, c = true;
    for (std::size_t i = 0; i < lam.size(); ++i) {
      a = a && dnc[i] <= cw[i] + tol(fig2.solver, cw[i]);
      const double lo = std::min(pnc[i], dnc[i]);
      c = c && std::abs(popt[i] - lo) <= tol(fig2.solver, lo);
    }
    std::size_t i04 = 0, i16 = 0;
    for (std::size_t i = 0; i < lam.size(); ++i) {
      if (std::abs(lam[i].lambda1 - 0.4) < 1e-9) i04 = i;
      if (std::abs(lam[i].lambda1 - 1.6) < 1e-9) i16 = i;
    }
    int sign_changes = 0;
    double crossing = NAN;
    for (std::size_t i = 1; i < lam.size(); ++i) {
      const bool before = pnc[i - 1] < dnc[i - 1], after = pnc[i] < dnc[i];
      if (before != after) {
        ++sign_changes;
        // Linear interpolation of the energy difference.
        const double d0 = pnc[i - 1] - dnc[i - 1], d1 = pnc[i] - dnc[i];
        crossing = lam[i - 1].lambda1 + (lam[i].lambda1 - lam[i - 1].lambda1) * d0 / (d0 - d1);
      }
    }
    const bool b = pnc[i04] >= dnc[i04] && pnc[i16] <= dnc[i16] && sign_changes == 1 &&
                   crossing >= 0.8 && crossing <= 1.6;
    const bool time_ok = fig2_secs < 900;
    std::string d = std::string("(a) DNC_SUP<=CW_SUP ") + (a ? "ok" : "violated") + "; (b) crossover at lambda~" +
                    num(crossing, "%.3f") + ", " + std::to_string(sign_changes) + " sign change(s), E(0.4) PNC " +
                    num(pnc[i04]) + " vs DNC " + num(dnc[i04]) + ", E(1.6) PNC " + num(pnc[i16]) + " vs DNC " +
                    num(dnc[i16]) + "; (c) POPT=min " + (c ? "ok" : "violated") + "; " + timed(fig2_secs, 900);
    return Verdict{a && b && c && time_ok && fig2_run->all_converged, d};
  });

  report(6, "Fig. 3 zero padding and superposition gap", [&] {
    const RunConfig cfg = config("fig3.cfg");
    const auto t0 = std::chrono::steady_clock::now();
    const SweepResult& r = keep(run_sweep(cfg));
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const Table t = table_of(r);
    const auto& zp = t.at("PNC_ZP");
    const auto& pnc = t.at("PNC_SUP");
    const auto& ts = t.at("DNC_TS");
    const auto& sup = t.at("DNC_SUP");
    const std::size_t n = cfg.sweep.size();
    bool constant = true, zp_above = true, ts_above = true, shrinking = true;
    double zp_spread = 0;
    for (std::size_t i = 0; i < n; ++i) {
      zp_spread = std::max(zp_spread, std::abs(zp[i] - zp[0]));
      constant = constant && std::abs(zp[i] - zp[0]) <= tol(cfg.solver, zp[0]);
      zp_above = zp_above && zp[i] >= pnc[i] - tol(cfg.solver, zp[i]);
      ts_above = ts_above && sup[i] <= ts[i] + tol(cfg.solver, ts[i]);
      if (i > 0) shrinking = shrinking && (ts[i] - sup[i]) <= (ts[i - 1] - sup[i - 1]) + tol(cfg.solver, ts[i]);
    }
    const bool equal_at_end = std::abs(zp[n - 1] - pnc[n - 1]) <= tol(cfg.solver, zp[n - 1]);
    std::string d = "PNC_ZP spread " + num(zp_spread, "%.2e") + (constant ? " ok" : " too large") +
                    "; PNC_ZP>=PNC_SUP " + (zp_above ? "ok" : "violated") + "; equal at lambda1=lambda2 " +
                    (equal_at_end ? "ok" : "violated") + "; DNC_SUP<=DNC_TS " + (ts_above ? "ok" : "violated") +
                    "; gap " + num(ts[0] - sup[0]) + " -> " + num(ts[n - 1] - sup[n - 1]) +
                    (shrinking ? " monotone" : " not monotone") + "; " + timed(s, 900);
    return Verdict{constant && zp_above && equal_at_end && ts_above && shrinking && s < 900 && r.all_converged, d};
  });

  report(7, "Fig. 4 ordering DNC_TS >= CW_SUP >= DNC_SUP", [&] {
    const RunConfig cfg = config("fig4.cfg");
    const SweepResult& r = keep(run_sweep(cfg));
    const Table t = table_of(r);
    const auto& ts = t.at("DNC_TS");
    const auto& cw = t.at("CW_SUP");
    const auto& sup = t.at("DNC_SUP");
    bool ok = r.all_converged;
    std::string d;
    for (std::size_t i = 0; i < cfg.sweep.size(); ++i) {
      const bool left = ts[i] >= cw[i] - tol(cfg.solver, cw[i]);
      const bool right = cw[i] >= sup[i] - tol(cfg.solver, sup[i]);
      ok = ok && left && right;
      d += "(" + num(cfg.sweep[i].lambda1, "%.1f") + "," + num(cfg.sweep[i].lambda2, "%.1f") + ") TS " +
           num(ts[i]) + (left ? " >= " : " < ") + "CW " + num(cw[i]) + (right ? " >= " : " < ") + "SUP " +
           num(sup[i]) + "; ";
    }
    return Verdict{ok, d};
  });

  report(8, "Fig. 5 (g_r1, g_r2) = (1,2) beats (2,1) for lambda1 < lambda2", [&] {
    const RunConfig c12 = config("fig5_r2.cfg");
    const RunConfig c21 = config("fig5_r1.cfg");
    const SweepResult& r12 = keep(run_sweep(c12));
    const SweepResult& r21 = keep(run_sweep(c21));
    const Table t12 = table_of(r12), t21 = table_of(r21);
    bool ok = r12.all_converged && r21.all_converged;
    std::string d;
    for (const char* s : {"DNC_SUP", "CW_SUP"}) {
      d += std::string(s) + ":";
      for (std::size_t i = 0; i < c12.sweep.size(); ++i) {
        const bool lower = t12.at(s)[i] < t21.at(s)[i];
        ok = ok && lower;
        d += " (" + num(c12.sweep[i].lambda1, "%.1f") + ",1) " + num(t12.at(s)[i]) + (lower ? " < " : " >= ") +
             num(t21.at(s)[i]);
      }
      d += "; ";
    }
    return Verdict{ok, d};
  });

  report(9, "KKT certificates on every converged solve", [&] {
    int solves = 0, bad = 0, unconverged = 0;
    double worst_kkt = 0, worst_slack = 0, worst_budget = 0;
    std::string first_bad;
    for (const auto& r : kept) {
      for (const auto& row : r.rows) {
        if (!row.converged) {
          ++unconverged;
          continue;
        }
        ++solves;
        const StrategySolution& s = row.solution;
        const SolverConfig cfg;  // every figure config uses the default tolerances
        bool ok = true;
        for (const auto& [_, v] : s.kkt_residuals) {
          worst_kkt = std::max(worst_kkt, v);
          ok = ok && v < cfg.eps_outer;
        }
        for (const auto& [_, v] : s.rate_slack) {
          worst_slack = std::max(worst_slack, v);
          ok = ok && v < cfg.eps_outer;
        }
        const double sum = s.fraction_sum();
        worst_budget = std::max(worst_budget, std::max(sum - 1.0, 1.0 - sum));
        ok = ok && sum <= 1.0 && sum >= 1.0 - cfg.eps_outer;
        if (!ok && bad++ == 0) first_bad = row.strategy + "(" + num(row.req.lambda1) + "," + num(row.req.lambda2) + ")";
      }
    }
    std::string d = std::to_string(solves) + " solves, " + std::to_string(bad) + " without certificate" +
                    (bad ? " (first " + first_bad + ")" : "") + ", " + std::to_string(unconverged) +
                    " unconverged; worst |P-bR-gamma| " + num(worst_kkt, "%.2e") + ", worst rate slack " +
                    num(worst_slack, "%.2e") + ", worst budget gap " + num(worst_budget, "%.2e");
    return Verdict{bad == 0 && solves > 0, d};
  });

  report(10, "determinism of two Fig. 2 sweeps", [&] {
    const bool same = !fig2_bytes[0].empty() && fig2_bytes[0] == fig2_bytes[1];
    return Verdict{same, std::to_string(fig2_bytes[0].size()) + " bytes, " + (same ? "identical" : "different")};
  });

  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
