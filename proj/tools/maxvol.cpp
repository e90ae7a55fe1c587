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


// maxvol: command-line front end.
//
// Exit codes: 0 success, 1 verification failed, 2 usage or I/O error,
// 3 rank deficiency, 4 swap cap exceeded.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "experiments.hpp"
#include "matrix_spec.hpp"
#include "maxvol/maxvol.hpp"

namespace {

using namespace maxvol;
using nlohmann::json;
namespace fs = std::filesystem;

enum ExitCode { kOk = 0, kVerifyFailed = 1, kUsage = 2, kRankDeficient = 3, kIterationCap = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputOptions {
  std::string input;
  std::string gen;
};

void add_input_options(CLI::App* cmd, InputOptions& in) {
  auto* a = cmd->add_option("-i,--input", in.input, "Matrix Market file");
  auto* b = cmd->add_option("-g,--gen", in.gen, std::string("Generated matrix, name:key=val,...  ") +
                                                    tools::kMatrixSpecHelp);
  a->excludes(b);
}

DenseMatrix load_matrix(const InputOptions& in) {
  if (!in.input.empty()) {
    if (!fs::exists(in.input)) throw IoError("input file not found: " + in.input);
    return io::read_matrix_market(fs::path(in.input));
  }
  if (!in.gen.empty()) {
    try {
      return tools::build_matrix(tools::parse_matrix_spec(in.gen));
    } catch (const std::invalid_argument& e) {
      throw UsageError(std::string("--gen: ") + e.what());
    }
  }
  throw UsageError("one of --input or --gen is required");
}

Mode parse_mode(const std::string& s) {
  if (s == "ge") return Mode::GE;
  if (s == "qr") return Mode::QR;
  throw UsageError("--mode must be ge or qr");
}

Selection leading_or_file(const std::string& file, Mode mode, const DenseMatrix& A, Index k) {
  if (!file.empty()) {
    Selection s = io::read_selection(file);
    if (mode == Mode::QR) s = Selection::columns(A.rows(), s.cols);
    return s;
  }
  if (k == 0) throw UsageError("need --selection or --k");
  if (mode == Mode::QR) {
    std::vector<Index> c(k);
    std::iota(c.begin(), c.end(), Index{0});
    return Selection::columns(A.rows(), c);
  }
  return Selection::leading(k, k);
}

fs::path ensure_dir(const std::string& dir) {
  fs::path p = dir.empty() ? fs::path(".") : fs::path(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw IoError("cannot create " + p.string() + ": " + ec.message());
  return p;
}

// ---------------------------------------------------------------------------

struct GenCmd {
  std::string spec;
  std::string out;
  int run() const {
    tools::MatrixSpec ms;
    DenseMatrix A;
    try {
      ms = tools::parse_matrix_spec(spec);
      A = tools::build_matrix(ms);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    fs::path target = out.empty() ? fs::path(ms.stem() + ".mtx") : fs::path(out);
    if (!out.empty() && (fs::is_directory(target) || out.back() == '/')) {
      ensure_dir(out);
      target = target / (ms.stem() + ".mtx");
    }
    io::write_matrix_market(target, A, "maxvol gen " + spec);
    std::cout << target.string() << "\n";
    return kOk;
  }
};

struct FactorCmd {
  InputOptions in;
  std::string mode = "ge", method = "maxvol", init = "greedy", selection, out;
  Index k = 0;
  std::optional<double> gamma;
  std::uint64_t seed = 0;
  std::optional<Index> max_swaps;

  int run() const {
    const DenseMatrix A = load_matrix(in);
    const Mode md = parse_mode(mode);
    if (k == 0) throw UsageError("--k must be >= 1");
    SearchConfig cfg;
    cfg.gamma = gamma.value_or(md == Mode::QR ? 2.0 : 1.0);
    cfg.seed = seed;
    cfg.max_swaps = max_swaps;
    if (init == "greedy") cfg.init = InitKind::Greedy;
    else if (init == "random") cfg.init = InitKind::RandomSeeded;
    else if (init == "given") {
      if (selection.empty()) throw UsageError("--init given requires --selection");
      cfg.init = InitKind::Given;
      cfg.given = io::read_selection(selection);
    } else throw UsageError("--init must be greedy, given or random");

    const fs::path dir = ensure_dir(out);
    json summary;
    if (method == "greedy") {
      if (md == Mode::GE) {
        const auto f = gecp_partial(A, k);
        io::write_factor(dir / "factor", f);
        summary = {{"method", "gecp"}, {"selection", io::to_json(f.selection())},
                   {"mu_b", mu_metric(A, f.selection(), Mode::GE)}};
      } else {
        const auto f = cpqr_partial(A, k);
        io::write_factor(dir / "factor", f);
        summary = {{"method", "cpqr"}, {"selection", io::to_json(f.selection())},
                   {"mu_b", mu_metric(A, f.selection(), Mode::QR)}};
      }
    } else if (method == "maxvol") {
      SearchReport rep;
      if (md == Mode::GE) {
        auto [f, r] = ge_local_maxvol(A, k, cfg);
        io::write_factor(dir / "factor", f);
        rep = std::move(r);
      } else {
        auto [f, r] = qr_local_maxvol(A, k, cfg);
        io::write_factor(dir / "factor", f);
        rep = std::move(r);
      }
      std::ofstream rj(dir / "report.jsonl");
      io::write_report_jsonl(rj, rep);
      if (!rj) throw IoError("cannot write " + (dir / "report.jsonl").string());
      summary = io::summary_json(rep);
    } else {
      throw UsageError("--method must be maxvol or greedy");
    }
    summary["schema_version"] = io::kSchemaVersion;
    summary["out"] = dir.string();
    std::cout << summary.dump() << "\n";
    return kOk;
  }
};

struct MetricCmd {
  InputOptions in;
  std::string mode = "ge", selection;
  Index k = 0;
  int run() const {
    const DenseMatrix A = load_matrix(in);
    const Mode md = parse_mode(mode);
    const Selection sel = leading_or_file(selection, md, A, k);
    const Index kk = sel.cols.size();
    const double mub = mu_metric(A, sel, md);
    const auto prof = mu_factor(md, A.rows(), A.cols(), kk, mub);
    json j{{"schema_version", io::kSchemaVersion}, {"mode", to_string(md)}, {"k", kk}, {"mu_b", mub},
           {"sandwich_factor", prof.mu_factor}, {"selection", io::to_json(sel)}};
    std::cout << j.dump() << "\n";
    return kOk;
  }
};

struct SvdCmd {
  InputOptions in;
  std::string out;
  int run() const {
    const DenseMatrix A = load_matrix(in);
    const auto s = singular_values(A);
    std::ofstream file;
    if (!out.empty()) {
      file.open(out);
      if (!file) throw IoError("cannot write " + out);
    }
    std::ostream& os = out.empty() ? std::cout : file;
    os << std::setprecision(17) << "j,sigma\n";
    for (Index j = 0; j < s.size(); ++j) os << j + 1 << "," << s[j] << "\n";
    return kOk;
  }
};

struct VerifyCmd {
  InputOptions in;
  std::string mode = "ge", selection;
  Index k = 0;
  double gamma = 1.0;
  int run() const {
    const DenseMatrix A = load_matrix(in);
    const Mode md = parse_mode(mode);
    const Selection sel = leading_or_file(selection, md, A, k);
    const auto c = verify_local_maxvol(md, A, sel, gamma);
    json j{{"schema_version", io::kSchemaVersion}, {"mode", to_string(md)}, {"gamma", gamma},
           {"passed", c.passed}, {"worst_ratio", io::number(c.worst_ratio)},
           {"worst_move", io::to_json(c.worst_move)}};
    std::cout << j.dump() << "\n";
    return c.passed ? kOk : kVerifyFailed;
  }
};

struct ExperimentCmd {
  std::string name, out;
  tools::ExperimentParams p;
  double s = 0.6;
  int run() const {
    const fs::path dir = ensure_dir(out);
    json summary;
    if (name == "pathlen_sweep") summary = tools::pathlen_sweep(p, dir);
    else if (name == "timing_sweep") summary = tools::timing_sweep(p, dir);
    else if (name == "metric_hist") summary = tools::metric_hist(p, dir);
    else if (name == "kernel_sv") summary = tools::kernel_sv(p, dir);
    else if (name == "sharpness") summary = tools::sharpness(p, dir);
    else if (name == "kahan") summary = tools::kahan(p, dir, s);
    else throw UsageError("unknown experiment '" + name + "'");
    std::cout << summary.dump() << "\n";
    return kOk;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rank-revealing LU and QR with maximum volume pivoting"};
  app.require_subcommand(1);

  GenCmd gen_cmd;
  auto* gen = app.add_subcommand("gen", "Write a generated matrix in Matrix Market format");
  gen->add_option("spec", gen_cmd.spec, tools::kMatrixSpecHelp)->required();
  gen->add_option("-o,--out", gen_cmd.out, "Output file or directory");

  FactorCmd fac;
  auto* factor = app.add_subcommand("factor", "Partial LU or QR factorization");
  add_input_options(factor, fac.in);
  factor->add_option("--mode", fac.mode, "ge or qr")->check(CLI::IsMember({"ge", "qr"}));
  factor->add_option("-k,--k", fac.k, "Pivot block size")->required();
  factor->add_option("--gamma", fac.gamma, "Relaxation (default 1 for ge, 2 for qr)");
  factor->add_option("--method", fac.method, "maxvol or greedy")->check(CLI::IsMember({"maxvol", "greedy"}));
  factor->add_option("--init", fac.init, "greedy, given or random")
      ->check(CLI::IsMember({"greedy", "given", "random"}));
  factor->add_option("--selection", fac.selection, "JSON file {\"rows\":[...],\"cols\":[...]}");
  factor->add_option("--seed", fac.seed, "Seed for --init random");
  factor->add_option("--max-swaps", fac.max_swaps, "Swap cap");
  factor->add_option("-o,--out", fac.out, "Output directory");

  MetricCmd met;
  auto* metric = app.add_subcommand("metric", "Pivot quality of a selection");
  add_input_options(metric, met.in);
  metric->add_option("--mode", met.mode, "ge or qr")->check(CLI::IsMember({"ge", "qr"}));
  metric->add_option("--selection", met.selection, "Selection JSON file");
  metric->add_option("-k,--k", met.k, "Use the leading k rows/columns");

  SvdCmd sv;
  auto* svdc = app.add_subcommand("svd", "Singular values as CSV");
  add_input_options(svdc, sv.in);
  svdc->add_option("-o,--out", sv.out, "Output CSV (stdout if omitted)");

  VerifyCmd ver;
  auto* verify = app.add_subcommand("verify", "Exhaustive local maximum volume check");
  add_input_options(verify, ver.in);
  verify->add_option("--mode", ver.mode, "ge or qr")->check(CLI::IsMember({"ge", "qr"}));
  verify->add_option("--selection", ver.selection, "Selection JSON file");
  verify->add_option("-k,--k", ver.k, "Use the leading k rows/columns");
  verify->add_option("--gamma", ver.gamma, "Relaxation")->check(CLI::Range(1.0, 1e300));

  ExperimentCmd exp;
  auto* experiment = app.add_subcommand("experiment", "Run a numerical experiment");
  experiment->add_option("name", exp.name, "pathlen_sweep, timing_sweep, metric_hist, kernel_sv, sharpness, kahan")
      ->required()
      ->check(CLI::IsMember({"pathlen_sweep", "timing_sweep", "metric_hist", "kernel_sv", "sharpness", "kahan"}));
  experiment->add_option("-o,--out", exp.out, "Output directory");
  experiment->add_option("--trials", exp.p.trials, "Trial or start count");
  experiment->add_option("--m", exp.p.m, "Rows");
  experiment->add_option("--n", exp.p.n, "Columns or grid size");
  experiment->add_option("-k,--k", exp.p.k, "Block size");
  experiment->add_option("--ks", exp.p.ks, "Block sizes for timing_sweep");
  experiment->add_option("--gamma", exp.p.gamma, "Relaxation");
  experiment->add_option("--seed", exp.p.seed, "Base seed");
  experiment->add_option("--s", exp.s, "Kahan parameter");
  experiment->add_flag("--full", exp.p.full, "pathlen_sweep: every starting node");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (gen->parsed()) return gen_cmd.run();
    if (factor->parsed()) return fac.run();
    if (metric->parsed()) return met.run();
    if (svdc->parsed()) return sv.run();
    if (verify->parsed()) return ver.run();
    if (experiment->parsed()) return exp.run();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const RankDeficient& e) {
    std::cerr << "error: rank deficient at step " << e.step() << ": " << e.what() << "\n";
    return kRankDeficient;
  } catch (const IterationCapExceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIterationCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
