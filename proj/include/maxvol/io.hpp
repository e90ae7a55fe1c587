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


#ifndef MAXVOL_IO_HPP
#define MAXVOL_IO_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "maxvol/assess.hpp"
#include "maxvol/errors.hpp"
#include "maxvol/ge.hpp"
#include "maxvol/matrix.hpp"
#include "maxvol/qr.hpp"
#include "maxvol/search.hpp"

namespace maxvol::io {

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline std::string lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Reads a real Matrix Market file, `array` or `coordinate`, `general` or
/// `symmetric`.
inline DenseMatrix read_matrix_market(std::istream& in, const std::string& name = "<stream>") {
  std::string line;
  if (!std::getline(in, line)) throw IoError(name + ": empty file");
  std::istringstream hdr(line);
  std::string banner, object, format, field, symmetry;
  hdr >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || detail::lower(object) != "matrix")
    throw IoError(name + ": missing %%MatrixMarket matrix header");
  format = detail::lower(format);
  field = detail::lower(field);
  symmetry = detail::lower(symmetry);
  if (field != "real" && field != "double" && field != "integer")
    throw IoError(name + ": unsupported field '" + field + "'");
  const bool symmetric = symmetry == "symmetric";
  if (!symmetric && symmetry != "general") throw IoError(name + ": unsupported symmetry '" + symmetry + "'");

  do {
    if (!std::getline(in, line)) throw IoError(name + ": missing size line");
  } while (line.empty() || line[0] == '%');
  std::istringstream sz(line);
  Index m = 0, n = 0, nnz = 0;
  if (format == "array") {
    if (!(sz >> m >> n)) throw IoError(name + ": bad size line");
    DenseMatrix A(m, n);
    for (Index j = 0; j < n; ++j)
      for (Index i = symmetric ? j : 0; i < m; ++i) {
        double v;
        if (!(in >> v)) throw IoError(name + ": truncated data");
        A(i, j) = v;
        if (symmetric) A(j, i) = v;
      }
    return A;
  }
  if (format == "coordinate") {
    if (!(sz >> m >> n >> nnz)) throw IoError(name + ": bad size line");
    DenseMatrix A(m, n);
    for (Index e = 0; e < nnz; ++e) {
      Index i, j;
      double v;
      if (!(in >> i >> j >> v)) throw IoError(name + ": truncated data");
      if (i < 1 || j < 1 || i > m || j > n) throw IoError(name + ": entry index out of range");
      A(i - 1, j - 1) = v;
      if (symmetric) A(j - 1, i - 1) = v;
    }
    return A;
  }
  throw IoError(name + ": unsupported format '" + format + "'");
}

inline DenseMatrix read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_matrix_market(in, path.string());
}

/// Dense `array real general` output, %.17g so values round-trip exactly.
inline void write_matrix_market(std::ostream& out, const DenseMatrix& A, const std::string& comment = {}) {
  out << "%%MatrixMarket matrix array real general\n";
  if (!comment.empty()) out << "% " << comment << "\n";
  out << A.rows() << " " << A.cols() << "\n";
  for (Index j = 0; j < A.cols(); ++j)
    for (Index i = 0; i < A.rows(); ++i) out << detail::format_double(A(i, j)) << "\n";
}

inline void write_matrix_market(const std::filesystem::path& path, const DenseMatrix& A,
                                const std::string& comment = {}) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  write_matrix_market(out, A, comment);
  if (!out) throw IoError("write failed: " + path.string());
}

// ---------------------------------------------------------------------------
// JSON.

using nlohmann::json;

inline json to_json(const Selection& s) { return {{"rows", s.rows}, {"cols", s.cols}}; }

inline Selection selection_from_json(const json& j) {
  Selection s;
  if (j.contains("rows")) s.rows = j.at("rows").get<std::vector<Index>>();
  s.cols = j.at("cols").get<std::vector<Index>>();
  return s;
}

inline Selection read_selection(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return selection_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

inline json to_json(const Move& mv) {
  json j = json::object();
  if (mv.row) j["row"] = {{"out", mv.row->out}, {"in", mv.row->in}};
  if (mv.col) j["col"] = {{"out", mv.col->out}, {"in", mv.col->in}};
  return j;
}

/// Non-finite doubles become null.
inline json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json summary_json(const SearchReport& r) {
  return {{"schema_version", kSchemaVersion},
          {"record", "summary"},
          {"mode", to_string(r.mode)},
          {"m", r.m},
          {"n", r.n},
          {"k", r.k},
          {"gamma", r.gamma},
          {"path_length", r.path_length},
          {"certified_gamma", r.certified_gamma},
          {"mu_b", r.mu_b()},
          {"worst_move", to_json(r.worst_move)},
          {"start_log_volume", number(r.start_log_volume)},
          {"end_log_volume", number(r.end_log_volume)},
          {"swap_cap", r.swap_cap},
          {"ended_on_tie", r.ended_on_tie},
          {"theoretical_path_bound", number(r.theoretical_path_bound)}};
}

/// One "swap" record per accepted move followed by one "summary" record.
inline void write_report_jsonl(std::ostream& out, const SearchReport& r) {
  for (Index i = 0; i < r.swaps.size(); ++i) {
    const SwapRecord& s = r.swaps[i];
    out << json{{"schema_version", kSchemaVersion},
                {"record", "swap"},
                {"step", i + 1},
                {"move", to_json(s.move)},
                {"ratio", s.ratio},
                {"log_volume_before", s.log_volume_before},
                {"log_volume_after", s.log_volume_after}}
               .dump()
        << "\n";
  }
  out << summary_json(r).dump() << "\n";
}

inline json to_json(const SandwichReport& r) {
  return {{"schema_version", kSchemaVersion}, {"mu", r.mu},
          {"worst_ratio", number(r.worst_ratio)}, {"worst_interlace", number(r.worst_interlace)},
          {"noise_floor", r.noise_floor}, {"passed", r.passed},
          {"sigma_a", r.sigma_a}, {"sigma_ak", r.sigma_ak}, {"sigma_residual", r.sigma_residual}};
}

/// CSV with header j,sigma_a,sigma_ak,sigma_residual; missing entries blank.
inline void write_sandwich_csv(std::ostream& out, const SandwichReport& r) {
  out << "j,sigma_a,sigma_ak,sigma_residual\n";
  const Index k = r.sigma_ak.size();
  for (Index j = 0; j < r.sigma_a.size(); ++j) {
    out << j + 1 << "," << detail::format_double(r.sigma_a[j]) << ",";
    if (j < k) out << detail::format_double(r.sigma_ak[j]);
    out << ",";
    if (j >= k && j - k < r.sigma_residual.size()) out << detail::format_double(r.sigma_residual[j - k]);
    out << "\n";
  }
}

// ---------------------------------------------------------------------------
// Factorizations on disk: one Matrix Market file per block plus meta.json.

inline void write_factor(const std::filesystem::path& dir, const PartialLU& f) {
  std::filesystem::create_directories(dir);
  write_matrix_market(dir / "A11.mtx", f.a11);
  write_matrix_market(dir / "W.mtx", f.w);
  write_matrix_market(dir / "Z.mtx", f.z);
  write_matrix_market(dir / "S.mtx", f.s);
  std::ofstream meta(dir / "meta.json");
  meta << json{{"schema_version", kSchemaVersion}, {"kind", "partial_lu"}, {"k", f.k},
               {"row_perm", f.row_perm}, {"col_perm", f.col_perm}, {"selection", to_json(f.selection())}}
              .dump(2)
       << "\n";
  if (!meta) throw IoError("cannot write " + (dir / "meta.json").string());
}

inline void write_factor(const std::filesystem::path& dir, const PartialQR& f) {
  std::filesystem::create_directories(dir);
  write_matrix_market(dir / "Q1.mtx", f.q1);
  write_matrix_market(dir / "R11.mtx", f.r11);
  write_matrix_market(dir / "R12.mtx", f.r12);
  write_matrix_market(dir / "R22_gram.mtx", f.r22_gram);
  std::ofstream meta(dir / "meta.json");
  meta << json{{"schema_version", kSchemaVersion}, {"kind", "partial_qr"}, {"k", f.k},
               {"col_perm", f.col_perm}, {"selection", to_json(f.selection())}}
              .dump(2)
       << "\n";
  if (!meta) throw IoError("cannot write " + (dir / "meta.json").string());
}

namespace detail {

inline json read_meta(const std::filesystem::path& dir, const char* kind) {
  std::ifstream in(dir / "meta.json");
  if (!in) throw IoError("cannot open " + (dir / "meta.json").string());
  json meta = json::parse(in, nullptr, false);
  if (meta.is_discarded() || meta.value("kind", "") != kind)
    throw IoError((dir / "meta.json").string() + ": not a " + kind + " record");
  return meta;
}

}  // namespace detail

inline PartialLU read_partial_lu(const std::filesystem::path& dir) {
  const json meta = detail::read_meta(dir, "partial_lu");
  PartialLU f;
  f.k = meta.at("k").get<Index>();
  f.row_perm = meta.at("row_perm").get<std::vector<Index>>();
  f.col_perm = meta.at("col_perm").get<std::vector<Index>>();
  f.a11 = read_matrix_market(dir / "A11.mtx");
  f.w = read_matrix_market(dir / "W.mtx");
  f.z = read_matrix_market(dir / "Z.mtx");
  f.s = read_matrix_market(dir / "S.mtx");
  return f;
}

inline PartialQR read_partial_qr(const std::filesystem::path& dir) {
  const json meta = detail::read_meta(dir, "partial_qr");
  PartialQR f;
  f.k = meta.at("k").get<Index>();
  f.col_perm = meta.at("col_perm").get<std::vector<Index>>();
  f.q1 = read_matrix_market(dir / "Q1.mtx");
  f.r11 = read_matrix_market(dir / "R11.mtx");
  f.r12 = read_matrix_market(dir / "R12.mtx");
  f.r22_gram = read_matrix_market(dir / "R22_gram.mtx");
  return f;
}

}  // namespace maxvol::io

#endif  // MAXVOL_IO_HPP
