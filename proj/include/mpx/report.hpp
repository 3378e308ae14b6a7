#pragma once

// Analysis reports. Every command builds one ordered JSON document; the
// table format is rendered from that same document, so both outputs carry
// identical numbers. Key order is fixed and no timing or host data enters a
// report, which keeps repeated runs byte-identical.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"
#include "mpx/communicability.hpp"
#include "mpx/core.hpp"
#include "mpx/efficiency.hpp"
#include "mpx/oracle.hpp"
#include "mpx/ranking.hpp"
#include "mpx/tropical.hpp"

namespace mpx::report {

using Json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

struct Settings {
  double gamma = 1.0;
  std::optional<int> k_max;  ///< empty: full (N - 1)
  unsigned threads = 1;
  int top = 1;
  Approach approach = Approach::efficiency;
  ImportanceWeighting weighting = ImportanceWeighting::weighted;
  bool spectral_gap = false;
  CommunicabilityOptions comm;
};

inline Json number(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

inline Json label(const std::string& s) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  return s;
}

inline Json edge_json(const MultiplexTensor& t, const EdgeRecommendation& r) {
  Json layers = Json::array();
  for (Index l : r.layers) layers.push_back(label(t.layer_label(l)));
  Json j;
  j["rank"] = r.rank;
  j["src"] = label(t.vertex_label(r.src));
  j["dst"] = label(t.vertex_label(r.dst));
  j["undirected"] = r.undirected;
  j["layers"] = std::move(layers);
  j["score"] = r.score;
  return j;
}

inline Json dataset_section(const MultiplexTensor& t, const std::string& input, double gamma) {
  Json d;
  d["input"] = input;
  d["n_vertices"] = t.n_vertices();
  d["n_layers"] = t.n_layers();
  d["n_entries"] = t.entries().size();
  d["directed"] = !t.undirected();
  d["gamma"] = gamma;
  return d;
}

inline Json efficiency_section(const MultiplexTensor& t, const Settings& s) {
  const CouplingParameter g(s.gamma);
  Json levels = Json::array();
  auto on_level = [&](const PathLengthMatrix& p) {
    const EfficiencyMatrix q = efficiency_matrix(p);
    const PerronTriple pt = perron(q.matrix, s.comm.perron);
    const auto cert = efficiency_certificates(q, pt.rho);
    const auto picks = select_efficient_edges(t, pt, s.top);
    Json row;
    row["k"] = p.k();
    Json chosen = Json::array();
    for (const auto& r : picks) chosen.push_back(edge_json(t, r));
    row["chosen"] = std::move(chosen);
    row["efficiency"] = cert.efficiency;
    row["rho"] = pt.rho;
    row["harmonic_bound"] = cert.harmonic_bound;
    row["efficiency_bound"] = cert.efficiency_bound;
    row["certificates_hold"] = cert.pass();
    levels.push_back(std::move(row));
  };
  const auto result = path_length_matrix(t, g, s.k_max, s.threads, on_level);

  bool monotone = true;
  for (std::size_t k = 1; k < levels.size(); ++k) {
    monotone = monotone && levels[k]["efficiency"].get<double>() >= levels[k - 1]["efficiency"].get<double>();
    monotone = monotone && levels[k]["rho"].get<double>() >= levels[k - 1]["rho"].get<double>() - 1e-10;
  }
  Json e;
  e["k_max"] = s.k_max ? Json(*s.k_max) : Json("full");
  e["k_reached"] = result.matrix.k();
  e["stabilization_k"] = result.stabilization_k ? Json(*result.stabilization_k) : Json(nullptr);
  e["lengths_stable_k"] = result.lengths_stable_k;
  e["monotone"] = monotone;
  e["levels"] = std::move(levels);
  return e;
}

inline const char* method_name(ExpMethod m) {
  switch (m) {
    case ExpMethod::dense: return "dense";
    case ExpMethod::krylov: return "krylov";
    default: return "auto";
  }
}

inline Json communicability_section(const MultiplexTensor& t, const Settings& s) {
  const SupraAdjacency b = build_supra(t, CouplingParameter(s.gamma));
  const SparsityPattern bd = pattern_of(block_diagonal(t));
  const CommunicabilityReport r = communicability_report(b, bd, s.comm);
  Json c;
  c["method"] = method_name(r.method);
  c["tc"] = number(r.tc);
  c["log_tc"] = r.log_tc;
  c["pc"] = number(r.pc);
  c["log_pc"] = r.log_pc;
  c["pc_struct"] = number(r.pc_struct);
  c["rho"] = r.rho;
  c["exp0_rho"] = number(r.bound_lo);
  c["kappa"] = r.kappa;
  c["kappa_struct"] = r.kappa_struct;
  c["bound_lo"] = number(r.bound_lo);
  c["bound_hi"] = number(r.bound_hi);
  c["bound_hi_struct"] = number(r.bound_hi_struct);
  c["approx_ratio"] = number(r.approx_ratio);
  c["residual_right"] = r.residual_right;
  c["residual_left"] = r.residual_left;
  c["irreducible"] = r.irreducible;
  if (s.spectral_gap) {
    const auto dp = oracle::dense_perron(DenseMatrix(b.matrix));
    c["spectral_gap_ratio"] = dp.second_modulus > 0 ? Json(dp.triple.rho / dp.second_modulus) : Json(nullptr);
  }
  Json v = Json::array();
  for (const auto& s2 : r.violations) v.push_back(s2);
  c["bound_violations"] = std::move(v);
  return c;
}

inline Json ranking_section(const MultiplexTensor& t, const Settings& s) {
  const CouplingParameter g(s.gamma);
  Json out;
  Json edges = Json::array();
  if (s.approach == Approach::efficiency) {
    const auto r = rank_edges_efficiency(t, g, s.k_max, s.top, s.threads, s.comm.perron);
    out["approach"] = "efficiency";
    out["k"] = r.k;
    out["efficiency"] = r.efficiency;
    out["rho"] = r.perron.rho;
    for (const auto& e : r.edges) edges.push_back(edge_json(t, e));
  } else {
    const auto r = rank_edges_popularity(t, g, s.top, s.weighting, s.comm.perron);
    out["approach"] = "popularity";
    out["weighting"] = s.weighting == ImportanceWeighting::weighted ? "weighted" : "unweighted";
    out["rho"] = r.perron.rho;
    for (const auto& e : r.edges) edges.push_back(edge_json(t, e));
  }
  out["edges"] = std::move(edges);
  return out;
}

inline Json measures_json(const Measures& m) {
  Json j;
  j["efficiency"] = m.efficiency;
  j["tc"] = number(m.tc);
  j["log_tc"] = m.log_tc;
  j["rho_supra"] = m.rho_supra;
  j["rho_efficiency"] = m.rho_efficiency;
  return j;
}

inline Json comparison_section(const MultiplexTensor& before, const std::vector<EdgeTarget>& targets,
                               const Perturbation& p, const Settings& s) {
  const MultiplexTensor after = apply_perturbation(before, targets, p);
  const auto c = compare_measures(before, after, CouplingParameter(s.gamma), s.threads, s.comm);
  Json tj = Json::array();
  for (const auto& e : targets) {
    Json j;
    j["layer"] = label(before.layer_label(e.layer));
    j["src"] = label(before.vertex_label(e.src));
    j["dst"] = label(before.vertex_label(e.dst));
    tj.push_back(std::move(j));
  }
  Json out;
  out["mode"] = p.mode == Perturbation::Mode::scale ? "scale" : "add";
  out["amount"] = p.amount;
  out["targets"] = std::move(tj);
  out["before"] = measures_json(c.before);
  out["after"] = measures_json(c.after);
  out["delta"] = measures_json(c.delta);
  return out;
}

namespace detail {

inline std::string scalar(const Json& v) {
  if (v.is_null()) return "-";
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number_float()) return fmt::format("{:.5e}", v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_array()) {
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + scalar(v[k]);
    return s + ")";
  }
  // Edge objects print as (src,dst) with their layers.
  if (v.contains("src") && v.contains("dst")) {
    std::string s = fmt::format("({},{})", scalar(v["src"]), scalar(v["dst"]));
    if (v.contains("layers")) s += " layers " + scalar(v["layers"]);
    return s;
  }
  return v.dump();
}

inline bool is_table(const Json& v) {
  return v.is_array() && !v.empty() && v[0].is_object();
}

inline void render(const Json& v, const std::string& indent, std::string& out) {
  for (const auto& [key, val] : v.items()) {
    if (val.is_object() && !(val.contains("src") && val.contains("dst"))) {
      out += indent + key + ":\n";
      render(val, indent + "  ", out);
    } else if (is_table(val)) {
      std::vector<std::string> cols;
      for (const auto& [c, _] : val[0].items()) cols.push_back(c);
      std::vector<std::vector<std::string>> rows;
      std::vector<std::size_t> width;
      for (const auto& c : cols) width.push_back(c.size());
      for (const auto& row : val) {
        std::vector<std::string> cells;
        for (std::size_t c = 0; c < cols.size(); ++c) {
          const Json& cell = row.contains(cols[c]) ? row[cols[c]] : Json(nullptr);
          std::string txt;
          if (cell.is_array()) {
            for (std::size_t k = 0; k < cell.size(); ++k) txt += (k ? "; " : "") + scalar(cell[k]);
            if (txt.empty()) txt = "-";
          } else {
            txt = scalar(cell);
          }
          width[c] = std::max(width[c], txt.size());
          cells.push_back(std::move(txt));
        }
        rows.push_back(std::move(cells));
      }
      out += indent + key + ":\n";
      std::string line = indent + "  ";
      for (std::size_t c = 0; c < cols.size(); ++c)
        line += fmt::format("{:<{}}{}", cols[c], width[c], c + 1 < cols.size() ? " | " : "");
      out += line + "\n";
      for (const auto& r : rows) {
        line = indent + "  ";
        for (std::size_t c = 0; c < cols.size(); ++c)
          line += fmt::format("{:<{}}{}", r[c], width[c], c + 1 < cols.size() ? " | " : "");
        out += line + "\n";
      }
    } else {
      out += indent + key + ": " + scalar(val) + "\n";
    }
  }
}

}  // namespace detail

/// Plain-text rendering of a report document: nested sections are indented,
/// arrays of records become column tables, floats print with six
/// significant digits.
inline std::string render_table(const Json& doc) {
  std::string out;
  detail::render(doc, "", out);
  return out;
}

}  // namespace mpx::report
