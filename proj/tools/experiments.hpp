// Copyright 2026 The maxvol Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Desk-scale numerical experiments run by `maxvol experiment`.

#ifndef MAXVOL_TOOLS_EXPERIMENTS_HPP
#define MAXVOL_TOOLS_EXPERIMENTS_HPP

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "maxvol/maxvol.hpp"

namespace maxvol::tools {

using nlohmann::json;
namespace fs = std::filesystem;

struct ExperimentParams {
  Index trials = 0;  // 0 means the experiment's default
  Index m = 0, n = 0, k = 0;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  bool full = false;
  std::vector<Index> ks;
};

inline std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot write " + p.string());
  out << std::setprecision(17);
  return out;
}

inline void write_json(const fs::path& p, const json& j) { open_out(p) << j.dump(2) << "\n"; }

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Path lengths of the gamma-local GE search from many starting nodes of one
/// Gaussian matrix.
inline json pathlen_sweep(const ExperimentParams& p, const fs::path& out) {
  const Index m = p.m ? p.m : 11, n = p.n ? p.n : m, k = p.k ? p.k : 3;
  const double gamma = p.gamma > 0 ? p.gamma : 1.0;
  const auto A = gen::gaussian(m, n, p.seed);
  const double total = binomial(m, k) * binomial(n, k);
  const Index starts = p.full ? static_cast<Index>(total) : std::min<Index>(p.trials ? p.trials : 2000, total);

  auto csv = open_out(out / "pathlen_sweep.csv");
  csv << "start,rows,cols,path_length,end_log_volume\n";
  std::map<Index, Index> hist;
  Index longest = 0, failures = 0;
  auto run = [&](Index idx, const Selection& sel) {
    SearchConfig cfg;
    cfg.gamma = gamma;
    cfg.init = InitKind::Given;
    cfg.given = sel;
    try {
      const auto [f, rep] = ge_local_maxvol(A, k, cfg);
      ++hist[rep.path_length];
      longest = std::max(longest, rep.path_length);
      auto join = [](const std::vector<Index>& v) {
        std::string s;
        for (Index x : v) s += (s.empty() ? "" : " ") + std::to_string(x);
        return s;
      };
      csv << idx << "," << join(sel.rows) << "," << join(sel.cols) << "," << rep.path_length << ","
          << rep.end_log_volume << "\n";
    } catch (const RankDeficient&) {
      ++failures;
    }
  };
  if (p.full) {
    std::vector<Index> r(k);
    std::iota(r.begin(), r.end(), Index{0});
    Index idx = 0;
    do {
      std::vector<Index> c(k);
      std::iota(c.begin(), c.end(), Index{0});
      do run(idx++, {r, c});
      while (maxvol::detail::next_combination(c, n));
    } while (maxvol::detail::next_combination(r, m));
  } else {
    for (Index t = 0; t < starts; ++t) {
      Rng rng(stream_seed(p.seed, t));
      auto r = rng.sample(m, k), c = rng.sample(n, k);
      std::sort(r.begin(), r.end());
      std::sort(c.begin(), c.end());
      run(t, {r, c});
    }
  }
  json h = json::object();
  for (auto [len, cnt] : hist) h[std::to_string(len)] = cnt;
  json summary{{"schema_version", io::kSchemaVersion}, {"experiment", "pathlen_sweep"}, {"m", m}, {"n", n},
               {"k", k}, {"gamma", gamma}, {"seed", p.seed}, {"starts", starts}, {"total_nodes", total},
               {"singular_starts", failures}, {"max_path_length", longest}, {"histogram", h}};
  write_json(out / "pathlen_sweep.json", summary);
  return summary;
}

/// Wall-clock of GECP vs GE gamma-local search and CPQR vs QR gamma-local
/// search on one Gaussian matrix for several k.
inline json timing_sweep(const ExperimentParams& p, const fs::path& out) {
  const Index n = p.n ? p.n : 500, m = p.m ? p.m : n;
  std::vector<Index> ks = p.ks.empty() ? std::vector<Index>{50, 150, 300, 500} : p.ks;
  const auto A = gen::gaussian(m, n, p.seed);
  auto csv = open_out(out / "timing_sweep.csv");
  csv << "mode,k,greedy_seconds,maxvol_seconds,ratio,path_length\n";
  json rows = json::array();
  for (Index k : ks) {
    if (k > std::min(m, n)) continue;
    for (Mode mode : {Mode::GE, Mode::QR}) {
      SearchConfig cfg;
      cfg.gamma = mode == Mode::GE ? 3.0 : 2.0;
      auto t0 = std::chrono::steady_clock::now();
      if (mode == Mode::GE) (void)gecp_partial(A, k);
      else (void)cpqr_partial(A, k);
      const double greedy = seconds_since(t0);
      t0 = std::chrono::steady_clock::now();
      const Index path = mode == Mode::GE ? ge_local_maxvol(A, k, cfg).second.path_length
                                          : qr_local_maxvol(A, k, cfg).second.path_length;
      const double search = seconds_since(t0);
      const double ratio = search / std::max(greedy, 1e-9);
      csv << to_string(mode) << "," << k << "," << greedy << "," << search << "," << ratio << "," << path << "\n";
      rows.push_back({{"mode", to_string(mode)}, {"k", k}, {"gamma", cfg.gamma}, {"greedy_seconds", greedy},
                      {"maxvol_seconds", search}, {"ratio", ratio}, {"path_length", path}});
    }
  }
  json summary{{"schema_version", io::kSchemaVersion}, {"experiment", "timing_sweep"}, {"m", m}, {"n", n},
               {"seed", p.seed}, {"runs", rows}};
  write_json(out / "timing_sweep.json", summary);
  return summary;
}

/// μ_B of the GECP and CPQR selections on independent Gaussian matrices.
inline json metric_hist(const ExperimentParams& p, const fs::path& out) {
  const Index m = p.m ? p.m : 50, n = p.n ? p.n : m, k = p.k ? p.k : 20, trials = p.trials ? p.trials : 500;
  auto csv = open_out(out / "metric_hist.csv");
  csv << "trial,seed,mu_b_gecp,mu_b_cpqr\n";
  double max_ge = 0.0, max_qr = 0.0;
  std::vector<double> ge_vals, qr_vals;
  for (Index t = 0; t < trials; ++t) {
    const std::uint64_t s = stream_seed(p.seed, t);
    const auto A = gen::gaussian(m, n, s);
    const double g = mu_metric(A, gecp_partial(A, k).selection(), Mode::GE);
    const double q = mu_metric(A, cpqr_partial(A, k).selection(), Mode::QR);
    csv << t << "," << s << "," << g << "," << q << "\n";
    max_ge = std::max(max_ge, g);
    max_qr = std::max(max_qr, q);
    ge_vals.push_back(g);
    qr_vals.push_back(q);
  }
  auto bins = [](const std::vector<double>& v) {
    json h = json::object();
    for (double x : v) {
      const double lo = std::floor(x * 10.0) / 10.0;
      char key[32];
      std::snprintf(key, sizeof key, "%.1f", lo);
      h[key] = h.value(key, 0) + 1;
    }
    return h;
  };
  json summary{{"schema_version", io::kSchemaVersion}, {"experiment", "metric_hist"}, {"m", m}, {"n", n}, {"k", k},
               {"trials", trials}, {"seed", p.seed}, {"max_mu_b_gecp", max_ge}, {"max_mu_b_cpqr", max_qr},
               {"reference_ceiling_gecp", 2.0}, {"reference_ceiling_cpqr", std::sqrt(2.0)},
               {"warn_threshold_gecp", 2.5}, {"warn_threshold_cpqr", 1.6},
               {"histogram_gecp", bins(ge_vals)}, {"histogram_cpqr", bins(qr_vals)}};
  write_json(out / "metric_hist.json", summary);
  return summary;
}

/// GECP singular value estimates on Chebyshev kernel matrices.
inline json kernel_sv(const ExperimentParams& p, const fs::path& out) {
  const Index N = p.n ? p.n : 300, k = p.k ? p.k : 5;
  const std::vector<gen::KernelSpec> specs{
      {gen::Kernel::RungeLike, 1.0, N, N}, {gen::Kernel::RungeLike, 10.0, N, N},
      {gen::Kernel::RungeLike, 100.0, N, N}, {gen::Kernel::Wendland, 0.0, N, N},
      {gen::Kernel::Wendland, 1.0, N, N}, {gen::Kernel::Wendland, 3.0, N, N}};
  auto csv = open_out(out / "kernel_sv.csv");
  csv << "kernel,param,j,sigma_a,sigma_ak,sigma_residual\n";
  json runs = json::array();
  for (const auto& spec : specs) {
    const auto A = gen::kernel_matrix(spec);
    const auto f = gecp_partial(A, k);
    const double mub = mu_metric(A, f.selection(), Mode::GE);
    const auto rep = validate_sandwich(A, ge_lowrank(f), mu_factor(Mode::GE, N, N, k, mub).mu_factor);
    for (Index j = 0; j < rep.sigma_a.size(); ++j) {
      csv << gen::to_string(spec.kernel) << "," << spec.param << "," << j + 1 << "," << rep.sigma_a[j] << ",";
      if (j < k) csv << rep.sigma_ak[j];
      csv << ",";
      if (j >= k) csv << rep.sigma_residual[j - k];
      csv << "\n";
    }
    runs.push_back({{"kernel", gen::to_string(spec.kernel)}, {"param", spec.param}, {"mu_b", mub},
                    {"sandwich_passed", rep.passed}, {"worst_ratio", rep.worst_ratio}});
  }
  json summary{{"schema_version", io::kSchemaVersion}, {"experiment", "kernel_sv"}, {"grid", N}, {"k", k},
               {"runs", runs}};
  write_json(out / "kernel_sv.json", summary);
  return summary;
}

/// The GE and QR sharpness constructions.
inline json sharpness(const ExperimentParams& p, const fs::path& out) {
  const Index m = p.m ? p.m : 20, n = p.n ? p.n : m, k = p.k ? p.k : 5;
  const auto A = gen::sharpness_ge(m, n, k);
  const auto st = ge_state_from_selection(A, Selection::leading(k, k));
  const auto cert = verify_local_maxvol(Mode::GE, A, Selection::leading(k, k), 1.0);
  const auto sw = validate_sandwich(A, ge_lowrank(st.lu), mu_factor(Mode::GE, m, n, k).mu_factor);
  const double res1 = sw.sigma_residual.empty() ? 0.0 : sw.sigma_residual[0];
  const double skp1 = k < sw.sigma_a.size() ? sw.sigma_a[k] : 0.0;

  const auto Q = gen::sharpness_qr(k, n);
  std::vector<Index> lead(k);
  std::iota(lead.begin(), lead.end(), Index{0});
  const auto qcert = verify_local_maxvol(Mode::QR, Q, Selection::columns(k + 1, lead), 1.0);
  const auto link = cholesky_link_check(Q, lead);
  json summary{{"schema_version", io::kSchemaVersion}, {"experiment", "sharpness"}, {"m", m}, {"n", n}, {"k", k},
               {"ge_local_maxvol", cert.passed}, {"ge_worst_neighbor_ratio", cert.worst_ratio},
               {"sigma1_residual", res1}, {"sigma_k_plus_1", skp1},
               {"residual_ratio", skp1 > 0 ? res1 / skp1 : 0.0},
               {"residual_ratio_lower_bound", (k + 2.0) * std::sqrt(double(m - k) * double(n - k)) / 4.0},
               {"qr_local_maxvol", qcert.passed}, {"qr_worst_neighbor_ratio", qcert.worst_ratio},
               {"gram_certificates_agree", link.agree()}};
  write_json(out / "sharpness.json", summary);
  return summary;
}

/// μ_B of the leading (n-1) selection on Kahan matrices.
inline json kahan(const ExperimentParams& p, const fs::path& out, double s) {
  const Index n = p.n ? p.n : 10;
  const auto K = gen::kahan(n, s), G = gen::kahan_gram(n, s);
  std::vector<Index> lead(n - 1);
  std::iota(lead.begin(), lead.end(), Index{0});
  const auto cpqr = cpqr_partial(K, n - 1);
  const auto gecp = gecp_partial(G, n - 1);
  const double qr_mu = verify_local_maxvol(Mode::QR, K, Selection::columns(n, lead), 1.0).worst_ratio;
  const double ge_mu = verify_local_maxvol(Mode::GE, G, {lead, lead}, 1.0).worst_ratio;
  json summary{{"schema_version", io::kSchemaVersion}, {"experiment", "kahan"}, {"n", n}, {"s", s},
               {"cpqr_selects_leading", cpqr.selected() == lead},
               {"gecp_selects_leading", gecp.selection().rows == lead && gecp.selection().cols == lead},
               {"mu_b_qr", std::max(qr_mu, 1.0)}, {"bound_qr", s * std::pow(1 + s, double(n - 2))},
               {"mu_b_ge", std::max(ge_mu, 1.0)}, {"bound_ge", s * s * std::pow(1 + s, 2.0 * double(n - 2))}};
  write_json(out / "kahan.json", summary);
  return summary;
}

}  // namespace maxvol::tools

#endif  // MAXVOL_TOOLS_EXPERIMENTS_HPP
