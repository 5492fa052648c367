#pragma once

#include "halfgeo/surface.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace halfgeo {

/// Built-in shorthand: `sphere:r`, `oblate:c`, `triaxial:a,b,c`.
Surface parse_surface_selector(std::string_view selector);

/// Catalog file: JSON array of {name, kind, params}. kind is one of sphere,
/// oblate, triaxial, custom; params is {radius}, {c}, {a, b, c} or
/// {terms: [[coeff, px, py, pz], ...], scale}.
std::vector<Surface> load_catalog(const std::string& filename);
std::vector<Surface> parse_catalog(std::string_view json_text);

/// Selector lookup: a catalog name when a catalog is given, else shorthand.
Surface resolve_surface(std::string_view selector, const std::vector<Surface>& catalog);

/// "x,y,z" -> vector of doubles (any count).
std::vector<double> parse_number_list(std::string_view text);

}  // namespace halfgeo
