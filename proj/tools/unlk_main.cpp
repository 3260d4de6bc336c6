// unlk: command line front end over the core library. One subcommand per
// process; JSON models in, CSV/JSON/SVG reports out; all output bytes are
// deterministic for identical inputs.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "unlk/deformation.hpp"
#include "unlk/errors.hpp"
#include "unlk/grid_ingest.hpp"
#include "unlk/invariant.hpp"
#include "unlk/mnus_oracle.hpp"
#include "unlk/model_json.hpp"
#include "unlk/plane_tree.hpp"
#include "unlk/rational.hpp"
#include "unlk/report.hpp"
#include "unlk/sphere.hpp"
#include "unlk/surface.hpp"

namespace {

using unlk::Rat;

template <class... Ts>
struct Overload : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

template <class T>
const T& payload_as(const unlk::ModelDocument& doc, const char* want) {
  if (const T* p = std::get_if<T>(&doc.payload)) return *p;
  throw unlk::ComputeError(std::string("this command needs a ") + want +
                           " model, got \"" + doc.kind() + "\"");
}

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw unlk::ComputeError("cannot open output file: " + out_path);
  f << text;
}

void print_notes(const std::vector<std::string>& notes) {
  for (const auto& n : notes) std::cerr << "note: " << n << "\n";
}

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// --- validate ---------------------------------------------------------------

std::vector<unlk::Diagnostic> family_diagnostics(const unlk::Family& f) {
  std::vector<unlk::Diagnostic> out;
  if (f.kind == unlk::Family::Kind::linear) {
    for (unlk::Diagnostic d : unlk::validate_tree(f.from)) {
      d.subject = "from/" + d.subject;
      out.push_back(std::move(d));
    }
    for (unlk::Diagnostic d : unlk::validate_tree(f.to)) {
      d.subject = "to/" + d.subject;
      out.push_back(std::move(d));
    }
  } else {
    try {
      unlk::build_truncation(f.g);
    } catch (const unlk::DegenerateProfileError& e) {
      out.push_back({"DegenerateProfile", "g", std::nullopt, e.what()});
    }
  }
  return out;
}

int run_validate(const std::string& file, bool decomposition) {
  unlk::ModelDocument doc = unlk::load_model(file);
  std::vector<unlk::Diagnostic> diags = std::visit(
      Overload{
          [](const unlk::PlaneTree& t) { return unlk::validate_tree(t); },
          [](const unlk::SurfaceGraph& g) { return unlk::validate_surface(g); },
          [](const unlk::HeightProfile& h) { return unlk::validate_sphere(h); },
          [](const unlk::ScalarGrid& g) { return unlk::validate_grid(g); },
          [](const unlk::Family& f) { return family_diagnostics(f); },
      },
      doc.payload);
  if (decomposition) {
    const auto& g = payload_as<unlk::SurfaceGraph>(doc, "surface");
    if (!diags.empty()) {
      std::cout << unlk::emit_validation_report(doc.kind(), diags);
      return 2;
    }
    std::cout << unlk::emit_decomposition_report(unlk::core_graph(g));
    return 0;
  }
  std::cout << unlk::emit_validation_report(doc.kind(), diags);
  return diags.empty() ? 0 : 2;
}

// --- spectrum / nu ----------------------------------------------------------

int run_spectrum(const std::string& file) {
  unlk::ModelDocument doc = unlk::load_model(file);
  const auto& tree = payload_as<unlk::PlaneTree>(doc, "plane_tree");
  unlk::require_valid(tree);
  std::cout << unlk::spectrum_csv(unlk::spectrum(tree));
  return 0;
}

int run_nu(const std::string& file, bool oracle_only, bool both) {
  unlk::ModelDocument doc = unlk::load_model(file);
  Rat recursive, oracle;
  std::visit(
      Overload{
          [&](const unlk::PlaneTree& t) {
            unlk::require_valid(t);
            if (!oracle_only) recursive = unlk::nu_recursive(t);
            if (oracle_only || both) oracle = unlk::nu_oracle(t);
          },
          [&](const unlk::SurfaceGraph& g) {
            unlk::require_valid(g);
            if (!oracle_only) recursive = unlk::nu_surface(g);
            if (oracle_only || both) oracle = unlk::nu_surface_oracle(g);
          },
          [&](const auto&) -> void {
            throw unlk::ComputeError(
                "nu needs a plane_tree or surface model");
          },
      },
      doc.payload);
  if (both) {
    std::cout << "recursive=" << unlk::rat_str(recursive)
              << " oracle=" << unlk::rat_str(oracle) << "\n";
    return recursive == oracle ? 0 : 4;
  }
  if (oracle_only) {
    std::cout << "oracle=" << unlk::rat_str(oracle) << "\n";
  } else {
    std::cout << "recursive=" << unlk::rat_str(recursive) << "\n";
  }
  return 0;
}

// --- zeta / heavy -----------------------------------------------------------

int run_zeta(const std::string& file, bool scan) {
  unlk::ModelDocument doc = unlk::load_model(file);
  const auto& g = payload_as<unlk::SurfaceGraph>(doc, "surface");
  unlk::require_valid(g);
  Rat z = unlk::zeta(g);
  if (!scan) {
    std::cout << "zeta=" << unlk::rat_str(z) << "\n";
    return 0;
  }
  // every vertex level plus one sentinel above the top brackets the clearing
  // threshold tightly enough for the scan's refinement to land exactly
  std::vector<Rat> thresholds;
  for (const auto& v : g.vertices) thresholds.push_back(v.level);
  Rat top = thresholds.front();
  for (const auto& t : thresholds) top = std::max(top, t);
  thresholds.push_back(top + 1);
  unlk::ZetaScanResult r = unlk::zeta_scan(g, thresholds);
  if (r.coarse) std::cerr << "note: scan thresholds were too coarse to refine\n";
  std::cout << "zeta=" << unlk::rat_str(z) << " scan=" << unlk::rat_str(r.value)
            << "\n";
  return z == r.value ? 0 : 4;
}

int run_heavy(const std::string& file, const std::string& cells_arg) {
  unlk::ModelDocument doc = unlk::load_model(file);
  const auto& g = payload_as<unlk::SurfaceGraph>(doc, "surface");
  unlk::require_valid(g);
  std::vector<std::string> cells = split_ids(cells_arg);
  if (cells.empty())
    throw unlk::ComputeError("--cells needs a comma-separated list of ids");
  bool h = unlk::heavy(g, cells);
  bool s = unlk::superheavy(g, cells);
  std::cout << "heavy=" << (h ? "yes" : "no")
            << " superheavy=" << (s ? "yes" : "no") << "\n";
  return 0;
}

// --- family commands --------------------------------------------------------

Rat tracking_tol(const unlk::Family& f, int steps, const std::string& tol_arg) {
  if (!tol_arg.empty()) return unlk::parse_rat(tol_arg);
  // default: twice the worst per-step motion, floored away from zero
  Rat tol = Rat(2) * unlk::family_slope_bound(f) / steps;
  return std::max(tol, Rat(1, 1000000));
}

int run_bifurcate(const std::string& file, int steps, const std::string& out,
                  const std::string& tol_arg) {
  unlk::ModelDocument doc = unlk::load_model(file);
  const auto& f = payload_as<unlk::Family>(doc, "family");
  unlk::BifurcationDiagram d =
      unlk::bifurcation(f, steps, tracking_tol(f, steps, tol_arg));
  write_output(out, unlk::bifurcation_csv(d));
  return 0;
}

int run_continue_c(const std::string& file, const std::string& c0_arg, int steps,
                   const std::string& out, const std::string& tol_arg) {
  unlk::ModelDocument doc = unlk::load_model(file);
  const auto& f = payload_as<unlk::Family>(doc, "family");
  Rat tol = tracking_tol(f, steps, tol_arg);
  unlk::BifurcationDiagram d = unlk::bifurcation(f, steps, tol);
  auto path = unlk::continue_c(d, unlk::parse_rat(c0_arg), tol);
  std::string csv = "sigma,c\n";
  for (const auto& [sigma, c] : path)
    csv += unlk::rat_str(sigma) + "," + unlk::rat_str(c) + "\n";
  write_output(out, csv);
  return 0;
}

// --- sphere -----------------------------------------------------------------

int run_sphere(const std::string& target, const std::string& zbeta,
               const std::string& delta) {
  if (target == "counterexample") {
    unlk::CounterexampleReport rep =
        unlk::counterexample(unlk::parse_rat(zbeta), unlk::parse_rat(delta));
    std::cout << unlk::emit_counterexample_report(rep);
    return 0;
  }
  unlk::ModelDocument doc = unlk::load_model(target);
  const auto& hp = payload_as<unlk::HeightProfile>(doc, "sphere");
  unlk::require_valid(hp);
  std::vector<std::string> warnings;
  Rat c = unlk::c_simple_bump(hp, &warnings);
  print_notes(warnings);
  std::cout << "c=" << unlk::rat_str(c) << "\n";
  return 0;
}

// --- ingest-grid ------------------------------------------------------------

int run_ingest(const std::string& file, int levels, double prune,
               const std::string& out) {
  unlk::ScalarGrid grid;
  if (file.size() >= 5 && file.compare(file.size() - 5, 5, ".json") == 0) {
    unlk::ModelDocument doc = unlk::load_model(file);
    grid = payload_as<unlk::ScalarGrid>(doc, "grid");
  } else {
    grid = unlk::read_grid(file);
  }
  unlk::require_valid(grid);
  unlk::ContourTree t = unlk::contour_tree(grid);
  std::vector<std::string> warnings;
  unlk::PlaneTree tree = unlk::estimate_profiles(t, levels, prune, &warnings);
  print_notes(warnings);
  unlk::ModelDocument doc;
  doc.payload = std::move(tree);
  write_output(out, unlk::emit_model(doc));
  return 0;
}

// --- svg --------------------------------------------------------------------

double parse_csv_double(const std::string& field, std::size_t row) {
  char* end = nullptr;
  double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0')
    throw unlk::ParseError("diagram csv row " + std::to_string(row) +
                           ": bad number \"" + field + "\"");
  return v;
}

unlk::BifurcationDiagram read_bifurcation_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw unlk::ParseError("cannot open diagram file: " + path);
  std::string line;
  auto strip_cr = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };
  if (!std::getline(f, line))
    throw unlk::ParseError("diagram csv: empty file");
  strip_cr(line);
  if (line != "sigma,branch_id,action,provenance")
    throw unlk::ParseError(
        "diagram csv: expected header sigma,branch_id,action,provenance");
  unlk::BifurcationDiagram d;
  std::map<long, std::size_t> slot;
  std::string current_sigma;
  bool have_sigma = false;
  std::size_t row = 1;
  while (std::getline(f, line)) {
    ++row;
    strip_cr(line);
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string item;
    std::istringstream cols(line);
    while (std::getline(cols, item, ',')) fields.push_back(item);
    if (fields.size() != 4)
      throw unlk::ParseError("diagram csv row " + std::to_string(row) +
                             ": expected 4 fields");
    if (!have_sigma || fields[0] != current_sigma) {
      current_sigma = fields[0];
      have_sigma = true;
      d.sigmas.push_back(Rat(parse_csv_double(fields[0], row)));
    }
    std::size_t si = d.sigmas.size() - 1;
    long id = 0;
    try {
      std::size_t used = 0;
      id = std::stol(fields[1], &used);
      if (used != fields[1].size()) throw std::invalid_argument(fields[1]);
    } catch (const std::exception&) {
      throw unlk::ParseError("diagram csv row " + std::to_string(row) +
                             ": bad branch id \"" + fields[1] + "\"");
    }
    auto it = slot.find(id);
    if (it == slot.end()) {
      it = slot.emplace(id, d.branches.size()).first;
      unlk::Branch b;
      b.id = static_cast<int>(id);
      b.provenance = fields[3];
      d.branches.push_back(std::move(b));
    }
    unlk::Branch& b = d.branches[it->second];
    if (b.values.size() < si + 1) b.values.resize(si + 1);
    b.values[si] = Rat(parse_csv_double(fields[2], row));
  }
  for (auto& b : d.branches) b.values.resize(d.sigmas.size());
  return d;
}

int run_svg(const std::string& diagram, const std::string& out) {
  write_output(out, unlk::bifurcation_svg(read_bifurcation_csv(diagram)));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "unlk: compute unlinking invariants of planar level-set models.\n"
      "Exit codes: 0 ok, 1 malformed input, 2 validation failure,\n"
      "3 computation error, 4 cross-check mismatch."};
  app.require_subcommand(1);
  app.footer("The UNLK_THREADS environment variable caps internal parallelism.");

  int rc = 0;

  std::string v_file;
  bool v_decomp = false;
  auto* validate = app.add_subcommand(
      "validate", "Check a model file; print a diagnostics report");
  validate->add_option("file", v_file, "model JSON file")->required();
  validate->add_flag("--decomposition", v_decomp,
                     "print the disk decomposition of a valid surface instead");
  validate->callback([&] { rc = run_validate(v_file, v_decomp); });

  std::string sp_file;
  auto* spectrum = app.add_subcommand(
      "spectrum", "Emit the action spectrum of a plane tree as CSV");
  spectrum->add_option("file", sp_file, "plane_tree model JSON file")->required();
  spectrum->callback([&] { rc = run_spectrum(sp_file); });

  std::string nu_file;
  bool nu_oracle = false, nu_both = false;
  auto* nu = app.add_subcommand(
      "nu", "Compute the unlinking invariant of a tree or surface");
  nu->add_option("file", nu_file, "plane_tree or surface model JSON file")
      ->required();
  auto* oracle_flag =
      nu->add_flag("--oracle", nu_oracle, "use the enumeration route only");
  nu->add_flag("--both", nu_both,
               "compute both routes; exit 4 when they disagree")
      ->excludes(oracle_flag);
  nu->callback([&] { rc = run_nu(nu_file, nu_oracle, nu_both); });

  std::string z_file;
  bool z_scan = false;
  auto* zeta = app.add_subcommand(
      "zeta", "Compute the top essential level of a surface model");
  zeta->add_option("file", z_file, "surface model JSON file")->required();
  zeta->add_flag("--scan", z_scan,
                 "also recover the value by threshold scanning; exit 4 when "
                 "the two disagree");
  zeta->callback([&] { rc = run_zeta(z_file, z_scan); });

  std::string h_file, h_cells;
  auto* heavy = app.add_subcommand(
      "heavy", "Classify a cell set of a surface model as heavy/superheavy");
  heavy->add_option("file", h_file, "surface model JSON file")->required();
  heavy
      ->add_option("--cells", h_cells,
                   "comma-separated vertex and edge ids forming the set")
      ->required();
  heavy->callback([&] { rc = run_heavy(h_file, h_cells); });

  std::string b_file, b_out, b_tol;
  int b_steps = 0;
  auto* bifurcate = app.add_subcommand(
      "bifurcate", "Track the spectrum of a family across sigma samples");
  bifurcate->add_option("file", b_file, "family model JSON file")->required();
  bifurcate->add_option("--steps", b_steps, "number of sigma intervals")
      ->required()
      ->check(CLI::PositiveNumber);
  bifurcate->add_option("--out", b_out, "CSV output path (default: stdout)");
  bifurcate->add_option("--tol", b_tol,
                        "tracking tolerance as p/q (default: from the family's "
                        "slope bound)");
  bifurcate->callback([&] { rc = run_bifurcate(b_file, b_steps, b_out, b_tol); });

  std::string c_file, c_c0, c_out, c_tol;
  int c_steps = 64;
  auto* continue_c = app.add_subcommand(
      "continue-c", "Follow the invariant branch of a family from sigma 0");
  continue_c->add_option("file", c_file, "family model JSON file")->required();
  continue_c
      ->add_option("--c0", c_c0, "starting value at sigma 0, as p/q")
      ->required();
  continue_c->add_option("--steps", c_steps, "number of sigma intervals")
      ->check(CLI::PositiveNumber);
  continue_c->add_option("--out", c_out, "CSV output path (default: stdout)");
  continue_c->add_option("--tol", c_tol,
                         "tracking tolerance as p/q (default: from the "
                         "family's slope bound)");
  continue_c->callback(
      [&] { rc = run_continue_c(c_file, c_c0, c_steps, c_out, c_tol); });

  std::string s_target, s_zbeta = "1/10", s_delta = "1/100";
  auto* sphere = app.add_subcommand(
      "sphere", "Evaluate a rotation profile on the sphere, or build the "
                "non-additivity counterexample");
  sphere
      ->add_option("target", s_target,
                   "sphere model JSON file, or the word \"counterexample\"")
      ->required();
  sphere->add_option("--zbeta", s_zbeta,
                     "counterexample: latitude of the split, as p/q");
  sphere->add_option("--delta", s_delta,
                     "counterexample: perturbation size, as p/q");
  sphere->callback([&] { rc = run_sphere(s_target, s_zbeta, s_delta); });

  std::string g_file, g_out;
  int g_levels = 64;
  double g_prune = 0;
  auto* ingest = app.add_subcommand(
      "ingest-grid", "Estimate a plane tree model from a scalar grid");
  ingest
      ->add_option("file", g_file,
                   "grid file: CSV, UNLK binary, or grid model JSON")
      ->required();
  ingest->add_option("--levels", g_levels, "profile sample count per edge")
      ->check(CLI::Range(2, 1 << 20));
  ingest->add_option("--prune", g_prune,
                     "drop leaf features whose level span is below this")
      ->check(CLI::NonNegativeNumber);
  ingest->add_option("--out", g_out, "model output path (default: stdout)");
  ingest->callback([&] { rc = run_ingest(g_file, g_levels, g_prune, g_out); });

  std::string svg_diagram, svg_out;
  auto* svg = app.add_subcommand(
      "svg", "Render a bifurcation CSV as an SVG diagram");
  svg->add_option("--diagram", svg_diagram, "bifurcation CSV file")->required();
  svg->add_option("--out", svg_out, "SVG output path (default: stdout)");
  svg->callback([&] { rc = run_svg(svg_diagram, svg_out); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const unlk::ValidationError& e) {
    for (const auto& d : e.diagnostics)
      std::cerr << unlk::format_diagnostic(d) << "\n";
    return 2;
  } catch (const unlk::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const unlk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return rc;
}
