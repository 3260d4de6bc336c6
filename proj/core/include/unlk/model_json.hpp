#pragma once

#include <string>
#include <variant>

#include "unlk/deformation.hpp"
#include "unlk/grid_ingest.hpp"
#include "unlk/plane_tree.hpp"
#include "unlk/sphere.hpp"
#include "unlk/surface.hpp"

namespace unlk {

// Versioned envelope around every model the tool reads or writes. The payload
// alternative determines the document kind string.
struct ModelDocument {
  int version = 1;
  std::variant<PlaneTree, SurfaceGraph, HeightProfile, Family, ScalarGrid> payload;

  const char* kind() const;
};

// Parse a document from JSON text. Throws ParseError on malformed JSON, an
// unknown kind, a version other than 1, or a shape violation.
ModelDocument parse_model(const std::string& text);

// Read and parse a document file.
ModelDocument load_model(const std::string& path);

// Serialize; byte-deterministic, rationals rendered as "p/q" strings.
// parse_model(emit_model(d)) reproduces d exactly.
std::string emit_model(const ModelDocument& doc);

// Report emitters used by the command line tool; all byte-deterministic.
std::string emit_validation_report(const std::string& kind,
                                   const std::vector<Diagnostic>& diagnostics);
std::string emit_decomposition_report(const DiskDecomposition& d);
std::string emit_counterexample_report(const CounterexampleReport& r);

}  // namespace unlk
