#include "halfgeo/catalog.hpp"

#include "halfgeo/error.hpp"

#include "json.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace halfgeo {

std::vector<double> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size()) {
      throw Error(ErrorCode::InvalidArgument, "expected a comma-separated list of numbers, got '" + std::string(text) + "'");
    }
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

Surface parse_surface_selector(std::string_view selector) {
  const auto colon = selector.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::InvalidArgument,
                "surface selector '" + std::string(selector) + "' must look like sphere:r, oblate:c or triaxial:a,b,c");
  }
  const std::string_view kind = selector.substr(0, colon);
  const auto params = parse_number_list(selector.substr(colon + 1));
  auto expect = [&](std::size_t n) {
    if (params.size() != n) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(kind) + " takes " + std::to_string(n) + " parameter(s), got " + std::to_string(params.size()));
    }
  };
  if (kind == "sphere") {
    expect(1);
    return Surface::sphere(params[0]);
  }
  if (kind == "oblate") {
    expect(1);
    return Surface::oblate(params[0]);
  }
  if (kind == "triaxial") {
    expect(3);
    return Surface::triaxial(params[0], params[1], params[2]);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown surface kind '" + std::string(kind) + "'");
}

std::vector<Surface> parse_catalog(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, std::string("catalog is not valid JSON: ") + e.what());
  }
  if (!doc.is_array()) throw Error(ErrorCode::Io, "catalog must be a JSON array");
  std::vector<Surface> out;
  for (const auto& entry : doc) {
    try {
      const std::string name = entry.at("name").get<std::string>();
      const std::string kind = entry.at("kind").get<std::string>();
      const auto& p = entry.at("params");
      if (kind == "sphere") {
        out.emplace_back(Sphere{p.at("radius").get<double>()}, name);
      } else if (kind == "oblate") {
        out.emplace_back(OblateEllipsoid{p.at("c").get<double>()}, name);
      } else if (kind == "triaxial") {
        out.emplace_back(TriaxialEllipsoid{p.at("a").get<double>(), p.at("b").get<double>(), p.at("c").get<double>()}, name);
      } else if (kind == "custom") {
        CustomImplicit c;
        for (const auto& t : p.at("terms")) {
          if (!t.is_array() || t.size() != 4) throw Error(ErrorCode::Io, "custom term must be [coeff, px, py, pz]");
          c.terms.push_back({t[0].get<double>(), t[1].get<int>(), t[2].get<int>(), t[3].get<int>()});
        }
        c.scale = p.value("scale", 1.0);
        out.emplace_back(std::move(c), name);
      } else {
        throw Error(ErrorCode::Io, "catalog entry '" + name + "' has unknown kind '" + kind + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::Io, std::string("malformed catalog entry: ") + e.what());
    }
  }
  return out;
}

std::vector<Surface> load_catalog(const std::string& filename) {
  std::ifstream is(filename);
  if (!is) throw Error(ErrorCode::Io, "cannot open catalog '" + filename + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_catalog(ss.str());
}

Surface resolve_surface(std::string_view selector, const std::vector<Surface>& catalog) {
  for (const auto& s : catalog) {
    if (s.name() == selector) return s;
  }
  return parse_surface_selector(selector);
}

}  // namespace halfgeo
