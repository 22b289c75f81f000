#include "msnet/convergence.hpp"

#include "msnet/concentric_oracle.hpp"
#include "msnet/error.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace msnet {

Config level_config(const Config& base, int level) {
  if (level < 0 || level > 4) throw Error(ErrorKind::ValidationError, "levels must lie in 0..4");
  Config c = base;
  c.scenario = "concentric";
  c.N_f = 1 << (7 + level);
  c.N_c = 1 << (2 * level);
  c.vertices = 1 << (7 + level);
  c.tau = std::pow(4.0, 3 - level) * 1e-3;
  c.surgery_threshold = 0.0;
  validate_config(c);
  return c;
}

ConvergenceRow run_level(const Config& base, int level) {
  const auto start = std::chrono::steady_clock::now();
  const Config cfg = level_config(base, level);
  const CurveNetwork net = build_scenario(cfg);
  RunOptions opt = run_options(cfg);
  const ConcentricConfig oracle;
  ConvergenceRow row;
  row.level = level;
  row.h_f = 2.0 * cfg.H / cfg.N_f;
  row.N = net.total_vertices();
  const RunResult res = run(net, opt, [&](int step, const SchemeState& s) {
    if (step == 0) return;
    row.curve_error = std::max(row.curve_error, curve_error(s.network, oracle, s.t));
    row.potential_error = std::max(row.potential_error, potential_error(s.W, *s.mesh, oracle, s.t));
    if (!audit_mesh(*s.mesh).ok()) row.mesh_audit_ok = false;
    row.K = s.mesh->num_vertices();
  });
  for (const auto& c : res.final_state.network.curves)
    for (int e = 0; e < c.num_edges(); ++e) row.h_gamma = std::max(row.h_gamma, c.edge_length(e));
  row.vdelta = res.max_vdelta;
  row.vdelta_rel = res.max_vdelta_rel;
  row.steps = static_cast<int>(res.history.size()) - 1;
  row.energy_violations = res.energy_violations;
  row.fp_stalls = res.fp_stalls;
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

ConvergenceTable run_convergence(const Config& base, const std::vector<int>& levels, std::ostream* progress) {
  ConvergenceTable t;
  for (int l : levels) {
    t.rows.push_back(run_level(base, l));
    if (progress) {
      const auto& r = t.rows.back();
      char buf[256];
      std::snprintf(buf, sizeof buf, "level %d: h_f=%.4e curve=%.4e potential=%.4e K=%d N=%d vdelta=%.1e rel=%.1e (%.1fs)\n",
                    r.level, r.h_f, r.curve_error, r.potential_error, r.K, r.N, r.vdelta, r.vdelta_rel,
                    r.wall_time);
      *progress << buf << std::flush;
    }
  }
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    const auto &a = t.rows[i - 1], &b = t.rows[i];
    const double lh = std::log(a.h_f / b.h_f);
    t.eoc_curve.push_back(std::log(a.curve_error / b.curve_error) / lh);
    t.eoc_potential.push_back(std::log(a.potential_error / b.potential_error) / lh);
  }
  return t;
}

void write_convergence_csv(std::ostream& os, const ConvergenceTable& t) {
  os << "level,h_f,h_gamma,potential_error,curve_error,K,N,vdelta,vdelta_rel,eoc_curve,eoc_potential\n";
  char buf[320];
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& r = t.rows[i];
    std::string eoc_c = "", eoc_p = "";
    if (i > 0) {
      char e[64];
      std::snprintf(e, sizeof e, "%.4f", t.eoc_curve[i - 1]);
      eoc_c = e;
      std::snprintf(e, sizeof e, "%.4f", t.eoc_potential[i - 1]);
      eoc_p = e;
    }
    std::snprintf(buf, sizeof buf, "%d,%.4e,%.4e,%.4e,%.4e,%d,%d,%.2e,%.2e,%s,%s\n", r.level, r.h_f, r.h_gamma,
                  r.potential_error, r.curve_error, r.K, r.N, r.vdelta, r.vdelta_rel, eoc_c.c_str(), eoc_p.c_str());
    os << buf;
  }
}

}  // namespace msnet
