#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

#include "pmaps/equations.hpp"
#include "pmaps/pattern.hpp"

namespace pmaps {

inline constexpr int kFormatVersion = 1;

// series.json: {format, version, class, Nz, Nx, coeffs: [[n, [[j, k, "int"]...]]...]}
nlohmann::json series_to_json(MapClass cls, const Series& F);

struct SeriesFile {
  MapClass cls = MapClass::All;
  int nz = 0, nx = 0;
  std::map<std::tuple<int, int, int>, mpz_class> coeffs;  // (n, j, k) -> value

  // [z^n x^k] at u = 1
  mpz_class at_u1(int n, int k) const;
  LabeledCoefficients labeled() const;
};
SeriesFile series_from_json(const nlohmann::json& j);

// types.json: {format, version, pattern, class, max_edges, types: [...], families: [...]}.
// Each type: {representative, r_i, e_i, v_i, deep_faces: [[valency, multiplicity]...], family}.
nlohmann::json types_to_json(const Pattern& p, MapClass cls, int max_edges, const std::vector<IntersectionType>& types,
                             const std::vector<IntersectionFamily>& families);
// Types as read back: constants only (representatives are parsed).
std::vector<TypeConstants> types_from_json(const nlohmann::json& j);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace pmaps
