// mpxcomm: communication analysis of multiplex networks.
//
// Exit codes: 0 success, 2 usage error, 3 data error, 4 numerical failure.

#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "mpx/io.hpp"
#include "mpx/report.hpp"

namespace {

using mpx::report::Json;

constexpr int exit_usage = 2;
constexpr int exit_data = 3;
constexpr int exit_numerical = 4;

struct Common {
  std::string input;
  std::string format = "multiplex";
  bool undirected = false;
  double gamma = 1.0;
  std::string kmax = "full";
  std::string output = "table";
  double tol = 1e-12;
  unsigned threads = 0;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::optional<int> parse_kmax(const std::string& s) {
  if (s == "full") return std::nullopt;
  try {
    std::size_t used = 0;
    const int k = std::stoi(s, &used);
    if (used == s.size() && k >= 1) return k;
  } catch (const std::exception&) {
  }
  throw UsageError("--kmax expects a positive integer or 'full', got '" + s + "'");
}

void add_common(CLI::App* cmd, Common& c, bool with_kmax) {
  cmd->add_option("--input", c.input, "edge list file")->required();
  cmd->add_option("--format", c.format, "input format")
      ->check(CLI::IsMember({"single", "multiplex"}))
      ->capture_default_str();
  cmd->add_flag("--undirected", c.undirected, "treat every edge as undirected");
  cmd->add_option("--gamma", c.gamma, "inter-layer coupling weight")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  if (with_kmax)
    cmd->add_option("--kmax,--k", c.kmax, "edge budget K (integer or 'full')")->capture_default_str();
  cmd->add_option("--output", c.output, "report format")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
  cmd->add_option("--tol", c.tol, "Perron solver relative residual tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--threads", c.threads, "worker threads (0 = all cores)")->capture_default_str();
}

mpx::MultiplexTensor load(const Common& c) {
  return mpx::load_multiplex(c.input,
                             c.format == "single" ? mpx::InputFormat::single_layer_edge_list
                                                  : mpx::InputFormat::extended_edge_list,
                             c.undirected ? mpx::Directedness::undirected
                                          : mpx::Directedness::directed);
}

mpx::report::Settings settings(const Common& c) {
  mpx::report::Settings s;
  s.gamma = c.gamma;
  s.k_max = parse_kmax(c.kmax);
  s.threads = c.threads == 0 ? mpx::default_threads() : c.threads;
  s.comm.perron.tol = c.tol;
  return s;
}

Json header(const std::string& command, const mpx::MultiplexTensor& t, const Common& c) {
  Json doc;
  doc["schema_version"] = mpx::report::schema_version;
  doc["command"] = command;
  doc["dataset"] = mpx::report::dataset_section(t, c.input, c.gamma);
  return doc;
}

void emit(const Json& doc, const Common& c) {
  if (c.output == "json")
    std::cout << doc.dump(2) << '\n';
  else
    std::cout << mpx::report::render_table(doc);
}

mpx::Index find_label(const std::vector<std::string>& labels, const std::string& s,
                      const char* what) {
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (labels[k] == s) return static_cast<mpx::Index>(k);
  throw mpx::DataError(fmt::format("unknown {} label '{}'", what, s));
}

std::vector<mpx::EdgeTarget> parse_edges(const mpx::MultiplexTensor& t,
                                         const std::vector<std::string>& specs) {
  std::vector<mpx::EdgeTarget> out;
  for (const auto& spec : specs) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t pos; (pos = spec.find(':', start)) != std::string::npos; start = pos + 1)
      parts.push_back(spec.substr(start, pos - start));
    parts.push_back(spec.substr(start));
    if (parts.size() != 3) throw UsageError("--edge expects LAYER:SRC:DST, got '" + spec + "'");
    out.push_back({find_label(t.layer_labels(), parts[0], "layer"),
                   find_label(t.vertex_labels(), parts[1], "vertex"),
                   find_label(t.vertex_labels(), parts[2], "vertex")});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Communication analysis of multiplex networks"};
  app.require_subcommand(1);

  Common c;
  std::string method = "auto";
  bool gap = false;
  std::string approach = "efficiency";
  int top = 1;
  bool unweighted = false;
  std::vector<std::string> edge_specs;
  std::optional<double> add_amount;
  std::optional<double> scale_factor;

  auto* eff = app.add_subcommand("efficiency", "global K-efficiency table with chosen edges");
  add_common(eff, c, true);
  eff->add_option("--top", top, "edges reported per level")->check(CLI::PositiveNumber);

  auto* com = app.add_subcommand("communicability", "total and Perron communicability");
  add_common(com, c, false);
  com->add_option("--method", method, "exponential kernel")
      ->check(CLI::IsMember({"auto", "dense", "krylov"}));
  com->add_flag("--gap", gap, "also report rho / |lambda_2| from a dense eigensolver");

  auto* rank = app.add_subcommand("rank", "rank intra-layer edges to strengthen");
  add_common(rank, c, true);
  rank->add_option("--approach", approach)->check(CLI::IsMember({"efficiency", "popularity"}));
  rank->add_option("--top", top, "number of edges")->check(CLI::PositiveNumber);
  rank->add_flag("--unweighted", unweighted,
                 "popularity: score by Wilkinson entries alone instead of weight * entry");

  auto* cmp = app.add_subcommand("perturb-compare", "measures before and after strengthening edges");
  add_common(cmp, c, false);
  cmp->add_option("--edge", edge_specs, "LAYER:SRC:DST target (labels as in the input)");
  auto* add_opt = cmp->add_option("--add", add_amount, "add this amount to each target weight");
  auto* scale_opt = cmp->add_option("--scale", scale_factor, "multiply each target weight");
  add_opt->excludes(scale_opt);

  auto* all = app.add_subcommand("analyze", "efficiency, communicability and both rankings");
  add_common(all, c, true);
  all->add_option("--top", top, "edges per ranking")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_usage;
  }

  const auto started = std::chrono::steady_clock::now();
  try {
    mpx::report::Settings s = settings(c);
    s.top = top;
    const mpx::MultiplexTensor t = load(c);
    if (!mpx::is_irreducible(mpx::build_supra(t, mpx::CouplingParameter(c.gamma)).matrix))
      std::cerr << "warning: supra-adjacency matrix is reducible; Perron quantities describe "
                   "the dominant strong component only\n";
    Json doc;
    if (eff->parsed()) {
      doc = header("efficiency", t, c);
      doc["efficiency"] = mpx::report::efficiency_section(t, s);
    } else if (com->parsed()) {
      s.comm.method = method == "dense"    ? mpx::ExpMethod::dense
                      : method == "krylov" ? mpx::ExpMethod::krylov
                                           : mpx::ExpMethod::automatic;
      s.spectral_gap = gap;
      doc = header("communicability", t, c);
      doc["communicability"] = mpx::report::communicability_section(t, s);
    } else if (rank->parsed()) {
      s.approach = approach == "popularity" ? mpx::Approach::popularity : mpx::Approach::efficiency;
      s.weighting = unweighted ? mpx::ImportanceWeighting::unweighted
                               : mpx::ImportanceWeighting::weighted;
      doc = header("rank", t, c);
      doc["ranking"] = mpx::report::ranking_section(t, s);
    } else if (cmp->parsed()) {
      mpx::Perturbation p;
      if (scale_factor) {
        p.mode = mpx::Perturbation::Mode::scale;
        p.amount = *scale_factor;
      } else {
        p.mode = mpx::Perturbation::Mode::add_absolute;
        p.amount = add_amount.value_or(0.0);
      }
      if (!edge_specs.empty() && !add_amount && !scale_factor)
        throw UsageError("--edge needs --add or --scale");
      doc = header("perturb-compare", t, c);
      doc["comparison"] = mpx::report::comparison_section(t, parse_edges(t, edge_specs), p, s);
    } else {
      doc = header("analyze", t, c);
      doc["efficiency"] = mpx::report::efficiency_section(t, s);
      doc["communicability"] = mpx::report::communicability_section(t, s);
      s.approach = mpx::Approach::efficiency;
      doc["ranking_efficiency"] = mpx::report::ranking_section(t, s);
      s.approach = mpx::Approach::popularity;
      doc["ranking_popularity"] = mpx::report::ranking_section(t, s);
    }
    emit(doc, c);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return exit_usage;
  } catch (const mpx::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  } catch (const mpx::Error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return exit_data;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  std::cerr << fmt::format("elapsed {:.3f} s\n", secs);
  return 0;
}
