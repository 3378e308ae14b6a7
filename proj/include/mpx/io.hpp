#pragma once

// Edge-list ingestion.
//
//   extended edge list:      <layer> <src> <dst> [weight]
//   single-layer edge list:  <src> <dst> [weight]
//
// Whitespace separated, '#' starts a comment, weight defaults to 1. Ids are
// arbitrary integers; they are compacted to dense 0-based indices in
// ascending numeric order and kept as labels.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "mpx/core.hpp"

namespace mpx {

enum class InputFormat { extended_edge_list, single_layer_edge_list };

namespace detail {

struct RawEntry {
  long long layer;
  long long src;
  long long dst;
  double weight;
  std::size_t line;
};

inline long long parse_id(std::string_view tok, std::size_t line) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw DataError("malformed id '" + std::string(tok) + "'", line);
  return v;
}

inline double parse_weight(std::string_view tok, std::size_t line) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw DataError("malformed weight '" + std::string(tok) + "'", line);
  if (!(v > 0.0) || !std::isfinite(v))
    throw DataError("weight must be positive and finite, got '" + std::string(tok) + "'", line);
  return v;
}

inline std::map<long long, Index> compact(std::vector<long long> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::map<long long, Index> out;
  for (std::size_t k = 0; k < ids.size(); ++k) out.emplace(ids[k], static_cast<Index>(k));
  return out;
}

}  // namespace detail

inline MultiplexTensor parse_multiplex(std::istream& in, InputFormat format,
                                       Directedness directedness) {
  std::vector<detail::RawEntry> raw;
  std::string text;
  std::size_t line_no = 0;
  const std::size_t min_tokens = format == InputFormat::extended_edge_list ? 3 : 2;

  while (std::getline(in, text)) {
    ++line_no;
    if (auto hash = text.find('#'); hash != std::string::npos) text.resize(hash);
    std::istringstream ss(text);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != min_tokens && tok.size() != min_tokens + 1)
      throw DataError(fmt::format("expected {} or {} fields, got {}", min_tokens,
                                  min_tokens + 1, tok.size()),
                      line_no);

    detail::RawEntry e{};
    std::size_t k = 0;
    e.layer = format == InputFormat::extended_edge_list ? detail::parse_id(tok[k++], line_no) : 1;
    e.src = detail::parse_id(tok[k++], line_no);
    e.dst = detail::parse_id(tok[k++], line_no);
    e.weight = k < tok.size() ? detail::parse_weight(tok[k], line_no) : 1.0;
    e.line = line_no;
    if (e.src == e.dst) throw DataError(fmt::format("self-loop on vertex {}", e.src), line_no);
    raw.push_back(e);
    if (directedness == Directedness::undirected)
      raw.push_back({e.layer, e.dst, e.src, e.weight, line_no});
  }
  if (raw.empty()) throw DataError("no entries");

  std::vector<long long> vertex_ids;
  std::vector<long long> layer_ids;
  for (const auto& e : raw) {
    vertex_ids.push_back(e.src);
    vertex_ids.push_back(e.dst);
    layer_ids.push_back(e.layer);
  }
  const auto vmap = detail::compact(std::move(vertex_ids));
  const auto lmap = detail::compact(std::move(layer_ids));

  std::stable_sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
    return std::tie(a.layer, a.src, a.dst) < std::tie(b.layer, b.src, b.dst);
  });
  std::vector<Entry> entries;
  entries.reserve(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const auto& e = raw[k];
    if (k > 0) {
      const auto& prev = raw[k - 1];
      if (prev.layer == e.layer && prev.src == e.src && prev.dst == e.dst) {
        if (prev.weight != e.weight)
          throw DataError(fmt::format("conflicting weight for ({}, {}, {}): {} vs {}", e.layer,
                                      e.src, e.dst, prev.weight, e.weight),
                          std::max(prev.line, e.line));
        continue;
      }
    }
    entries.push_back({lmap.at(e.layer), vmap.at(e.src), vmap.at(e.dst), e.weight});
  }

  std::vector<std::string> vlabels(vmap.size());
  for (const auto& [id, idx] : vmap) vlabels[idx] = std::to_string(id);
  std::vector<std::string> llabels(lmap.size());
  for (const auto& [id, idx] : lmap) llabels[idx] = std::to_string(id);

  return MultiplexTensor(static_cast<Index>(vmap.size()), static_cast<Index>(lmap.size()),
                         std::move(entries), directedness, std::move(vlabels),
                         std::move(llabels));
}

inline MultiplexTensor load_multiplex(const std::string& path, InputFormat format,
                                      Directedness directedness) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open input file '" + path + "'");
  return parse_multiplex(in, format, directedness);
}

/// Writes every stored entry as `<layer> <src> <dst> <weight>` using the
/// original labels, in canonical order. Undirected tensors emit both
/// orientations, which the parser collapses again.
inline void write_extended_edge_list(std::ostream& out, const MultiplexTensor& t) {
  for (const Entry& e : t.entries())
    out << fmt::format("{} {} {} {}\n", t.layer_label(e.layer), t.vertex_label(e.src),
                       t.vertex_label(e.dst), e.weight);
}

}  // namespace mpx
