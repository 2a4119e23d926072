#include "pmaps/json_io.hpp"

#include <fstream>

#include "pmaps/map_io.hpp"

namespace pmaps {

namespace {

void check_format(const nlohmann::json& j, const std::string& format) {
  if (!j.is_object() || j.value("format", "") != format)
    throw UsageError("not a " + format + " document");
  if (j.value("version", 0) != kFormatVersion)
    throw UsageError(format + " version " + std::to_string(j.value("version", 0)) + " is not supported");
}

}  // namespace

nlohmann::json series_to_json(MapClass cls, const Series& F) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (int n = 0; n <= F.nz(); ++n) {
    const PolyUX& c = F.coeff(n);
    nlohmann::json terms = nlohmann::json::array();
    for (int k = 0; k <= c.nx(); ++k) {
      const auto& row = c.x_slice(k);
      for (std::size_t j = 0; j < row.size(); ++j)
        if (row[j] != 0) terms.push_back({static_cast<int>(j), k, row[j].get_str()});
    }
    coeffs.push_back({n, terms});
  }
  return {{"format", "pmaps-series"}, {"version", kFormatVersion}, {"class", to_string(cls)},
          {"Nz", F.nz()},             {"Nx", F.nx()},                {"coeffs", coeffs}};
}

SeriesFile series_from_json(const nlohmann::json& j) {
  check_format(j, "pmaps-series");
  SeriesFile s;
  s.cls = parse_map_class(j.at("class").get<std::string>());
  s.nz = j.at("Nz").get<int>();
  s.nx = j.at("Nx").get<int>();
  for (const auto& entry : j.at("coeffs")) {
    const int n = entry.at(0).get<int>();
    for (const auto& t : entry.at(1))
      s.coeffs[{n, t.at(0).get<int>(), t.at(1).get<int>()}] = mpz_class(t.at(2).get<std::string>());
  }
  return s;
}

mpz_class SeriesFile::at_u1(int n, int k) const {
  mpz_class s = 0;
  for (auto it = coeffs.lower_bound({n, 0, 0}); it != coeffs.end() && std::get<0>(it->first) == n; ++it)
    if (std::get<2>(it->first) == k) s += it->second;
  return s;
}

LabeledCoefficients SeriesFile::labeled() const {
  LabeledCoefficients out;
  for (int n = 0; n <= nz; ++n) {
    out.A.push_back(at_u1(n, 0));
    out.B.push_back(at_u1(n, 1));
    out.C2.push_back(2 * at_u1(n, 2));
  }
  return out;
}

nlohmann::json types_to_json(const Pattern& p, MapClass cls, int max_edges, const std::vector<IntersectionType>& types,
                             const std::vector<IntersectionFamily>& families) {
  std::vector<int> family_of(types.size(), -1);
  for (std::size_t f = 0; f < families.size(); ++f)
    for (std::size_t i : families[f].members) family_of[i] = static_cast<int>(f);
  nlohmann::json ts = nlohmann::json::array();
  for (std::size_t i = 0; i < types.size(); ++i) {
    const auto& t = types[i];
    nlohmann::json deep = nlohmann::json::array();
    for (const auto& [j, d] : t.deep_faces) deep.push_back({j, d});
    ts.push_back({{"representative", format_map(t.representative)},
                  {"r_i", t.rotations},
                  {"e_i", t.edges},
                  {"v_i", t.root_valency},
                  {"deep_faces", deep},
                  {"family", family_of[i]}});
  }
  nlohmann::json fs = nlohmann::json::array();
  for (const auto& f : families)
    fs.push_back({{"core", format_map(f.core)}, {"v", f.root_valency}, {"members", f.members}});
  return {{"format", "pmaps-itypes"},
          {"version", kFormatVersion},
          {"pattern", format_map(p.map)},
          {"class", to_string(cls)},
          {"max_edges", max_edges},
          {"types", ts},
          {"families", fs}};
}

std::vector<TypeConstants> types_from_json(const nlohmann::json& j) {
  check_format(j, "pmaps-itypes");
  std::vector<TypeConstants> out;
  for (const auto& t : j.at("types")) {
    TypeConstants c{t.at("r_i").get<int>(), t.at("e_i").get<int>(), t.at("v_i").get<int>(), {}};
    for (const auto& d : t.at("deep_faces")) c.deep_faces[d.at(0).get<int>()] = d.at(1).get<int>();
    parse_map(t.at("representative").get<std::string>());
    out.push_back(std::move(c));
  }
  return out;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << j.dump(2) << "\n";
  if (!out) throw UsageError("write failed: " + path);
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(path + ": " + e.what());
  }
}

}  // namespace pmaps
