#pragma once

#include "magbottle/gauge.hpp"
#include "magbottle/surface.hpp"

#include <iosfwd>
#include <string>
#include <string_view>

namespace magbottle {

/// Builtin generator spec: "sphere:<level>", "torus:<N>x<M>" or "genus:<g>:<refine>".
/// Throws Error(InvalidArgument) on a malformed spec.
Mesh builtin_mesh(std::string_view spec);

/// Mesh document: {"vertices": V, "faces": [[a,b,c],...], "genus"?: g,
/// "positions"?: [[x,y,z],...], "edge_lengths"?: [...]}. Edge lengths are
/// indexed like CombinatorialSurface::edges(). Without either metric field every
/// edge gets length 1.
/// Throws Error(IoError) on unreadable or malformed JSON and, with require_valid,
/// Error(InvalidMesh) when validation fails.
Mesh parse_mesh_json(std::string_view text, bool require_valid = true);
Mesh read_mesh_json(const std::string& path, bool require_valid = true);
void write_mesh_json(std::ostream& out, const Mesh& mesh);

/// {"flux": [...]} with one entry per face, or {"uniform_total": x}.
FluxAssignment parse_flux_json(std::string_view text, const CombinatorialSurface& surface);
FluxAssignment read_flux_json(const std::string& path, const CombinatorialSurface& surface);

/// {"phase": [...]} with one entry per edge.
Connection parse_connection_json(std::string_view text, const CombinatorialSurface& surface);
Connection read_connection_json(const std::string& path, const CombinatorialSurface& surface);
void write_connection_json(std::ostream& out, const CombinatorialSurface& surface, const Connection& conn);

void write_validation_json(std::ostream& out, const ValidationReport& report);

std::string read_text_file(const std::string& path);

} // namespace magbottle
