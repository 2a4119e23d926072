#include <doctest.h>

#include <algorithm>
#include <set>

#include "pmaps/json_io.hpp"
#include "pmaps/map_io.hpp"
#include "pmaps/pattern.hpp"

using namespace pmaps;

namespace {

RootedMap triple_edge() { return parse_map("darts=6 sigma=(0 2 4)(1 5 3) alpha=(0 1)(2 3)(4 5) root=0"); }

// Coverage and deep-face invariants of one intersection type.
void check_type(const Pattern& p, const IntersectionType& t) {
  const RootedMap& m = t.representative;
  const auto& [a, b] = t.occ_pair;
  std::set<Dart> cover(a.dart_image.begin(), a.dart_image.end());
  cover.insert(b.dart_image.begin(), b.dart_image.end());
  CHECK(static_cast<int>(cover.size()) == m.num_darts());
  CHECK(occurrences_intersect(m, a, b));
  CHECK(t.edges == m.num_edges());
  CHECK(t.root_valency == m.root_face_valency());
  CHECK(t.edges >= p.edges);
  CHECK(t.edges <= 2 * p.edges);
  std::map<int, int> deep;
  for (int f = 0; f < m.num_faces(); ++f) {
    if (f == m.root_face()) continue;
    const bool in_a = std::binary_search(a.interior_faces.begin(), a.interior_faces.end(), f);
    const bool in_b = std::binary_search(b.interior_faces.begin(), b.interior_faces.end(), f);
    if (!in_a && !in_b) ++deep[m.face_valency(f)];
  }
  CHECK(deep == t.deep_faces);
  CHECK(t.rotations >= 1);
  CHECK(t.rotations <= t.root_valency);
}

}  // namespace

TEST_CASE("pattern constants") {
  Pattern fly = fly_pattern();
  CHECK(fly.edges == 4);
  CHECK(fly.boundary_length == 4);
  CHECK(fly.rotations == 2);
  CHECK(fly.pinch_points.size() == 1);
  CHECK_FALSE(fly.simple_boundary());
  Pattern dg = digon_pattern();
  CHECK(dg.edges == 2);
  CHECK(dg.boundary_length == 2);
  CHECK(dg.rotations == 1);
  CHECK(dg.simple_boundary());
  CHECK(dg.simple_boundary() == has_partial_simple_boundary(dg.map, dg.boundary_length - 1));
  CHECK(fly.boundary_length % fly.rotations == 0);
  CHECK_THROWS_AS(Pattern::from_map(RootedMap::atomic()), UsageError);
}

TEST_CASE("occurrences in small hosts") {
  Pattern dg = digon_pattern(), fly = fly_pattern();
  auto occ = find_occurrences(triple_edge(), dg);
  CHECK(occ.size() == 2);
  CHECK_FALSE(occurrences_intersect(triple_edge(), occ[0], occ[1]));
  CHECK(occurrences_intersect(triple_edge(), occ[0], occ[0]));
  CHECK(count_occurrences(RootedMap::from_sigma({1, 0}, 0), fly) == 0);
  CHECK(count_occurrences(fly.map, fly) == 1);
  CHECK(count_occurrences(RootedMap::atomic(), fly) == 0);
  // a 2-gon cannot occur in its own exterior: the root face is never interior
  CHECK(count_occurrences(dg.map, dg) == 1);
}

TEST_CASE("occurrence embeddings respect the pattern structure") {
  Pattern fly = fly_pattern();
  Enumerator e;
  const auto& run = e.generate(6, MapClass::All);
  for (std::size_t i = 0; i < run.size(); i += 5) {
    RootedMap host = run.map(i);
    const std::size_t bound = host.num_darts();
    auto occ = find_occurrences(host, fly);
    CHECK(occ.size() <= bound * bound);
    for (const auto& o : occ) {
      for (Dart d = 0; d < fly.map.num_darts(); ++d) CHECK(o.embedding[fly.map.alpha(d)] == host.alpha(o.embedding[d]));
      CHECK_FALSE(std::binary_search(o.interior_faces.begin(), o.interior_faces.end(), host.root_face()));
    }
  }
}

TEST_CASE("two flies sharing their centre with alternating petals intersect") {
  // centre with four 2-gons; the flies take petals 1,3 and 2,4
  RootedMap star = parse_map(
      "darts=16 sigma=(0 2 4 6 8 10 12 14)(1 3)(5 7)(9 11)(13 15) "
      "alpha=(0 1)(2 3)(4 5)(6 7)(8 9)(10 11)(12 13)(14 15) root=0");
  auto occ = find_occurrences(star, fly_pattern());
  REQUIRE(occ.size() >= 2);
  CHECK(count_intersecting_pairs(star, occ) > 0);
}

TEST_CASE("the 2-gon has no intersection types") {
  Enumerator e;
  CHECK(enumerate_intersection_types(digon_pattern(), MapClass::All, 4, e).empty());
}

TEST_CASE("fly intersection types") {
  Enumerator e;
  Pattern fly = fly_pattern();
  auto types = enumerate_intersection_types(fly, MapClass::All, 8, e);
  CHECK(types.size() == 15);
  for (const auto& t : types) check_type(fly, t);
  auto families = group_intersection_families(types);
  CHECK(families.size() == 7);
  std::size_t members = 0;
  for (const auto& f : families) members += f.members.size();
  CHECK(members == types.size());

  const auto golden = read_json_file(PMAPS_GOLDEN_DIR "/fly_types.json");
  CHECK(types_to_json(fly, MapClass::All, 8, types, families) == golden);
  CHECK(types_from_json(golden).size() == 15);
}

TEST_CASE("contracting 2-faces") {
  RootedMap t = triple_edge();
  RootedMap c = contract_two_faces(t);
  // the two non-root 2-gons collapse into one edge: a bridge remains
  CHECK(c.num_edges() == 1);
  CHECK(c.root_face_valency() == 2);
  CHECK(contract_two_faces(fly_pattern().map).num_edges() == 2);
}
