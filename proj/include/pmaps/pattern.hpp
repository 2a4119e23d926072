#pragma once

#include <map>
#include <string>
#include <vector>

#include "pmaps/enumerate.hpp"
#include "pmaps/map.hpp"

namespace pmaps {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A rooted map used as a pattern. Its root face is the exterior; every other
// face is interior.
struct Pattern {
  RootedMap map;
  int edges = 0;
  int boundary_length = 0;          // v: root face valency
  int rotations = 0;                // r: non-isomorphic rootings on the exterior
  std::vector<int> pinch_points;    // vertices visited twice or more by the boundary walk
  std::vector<int> interior_faces;  // face ids of map other than the root face

  static Pattern from_map(RootedMap map);
  bool simple_boundary() const { return pinch_points.empty(); }
};

int rotations_of(const Pattern& p);

// The fly (two 2-gons sharing a vertex) and the 2-gon, rooted on the exterior.
Pattern fly_pattern();
Pattern digon_pattern();

struct Occurrence {
  std::vector<Dart> embedding;       // pattern dart -> host dart
  std::vector<Dart> dart_image;      // sorted
  std::vector<int> interior_faces;   // sorted host face ids
  std::size_t host_fingerprint = 0;

  friend bool operator==(const Occurrence& a, const Occurrence& b) {
    return a.dart_image == b.dart_image && a.interior_faces == b.interior_faces;
  }
};

std::size_t host_fingerprint(const RootedMap& host);

// All occurrences of p in host, one per class of embeddings that differ by an
// exterior-preserving automorphism of p (deduplicated on dart image and
// interior faces). Sorted by (dart_image, interior_faces).
std::vector<Occurrence> find_occurrences(const RootedMap& host, const Pattern& p);
std::size_t count_occurrences(const RootedMap& host, const Pattern& p);

// Common interior face, or a shared vertex at which the darts of the two
// occurrences cannot be split into two contiguous cyclic runs (darts owned by
// both occurrences fit either run).
bool occurrences_intersect(const RootedMap& host, const Occurrence& a, const Occurrence& b);

struct IntersectionType {
  RootedMap representative;
  std::pair<Occurrence, Occurrence> occ_pair;
  int rotations = 0;                    // r_i
  int edges = 0;                        // e_i
  int root_valency = 0;                 // v_i
  std::map<int, int> deep_faces;        // valency -> multiplicity
};

// Brute force over all maps of class cls with at most max_edges edges:
// every unordered intersecting pair covering the whole map, grouped by the
// rotation class of (map, pair). Sorted by representative canonical code.
std::vector<IntersectionType> enumerate_intersection_types(const Pattern& p, MapClass cls, int max_edges,
                                                           Enumerator& enumerator);

// Identifies the two edges of every non-root face of valency 2 bounded by two
// distinct edges, repeatedly, until no such face is left. The root stays in
// the root face.
RootedMap contract_two_faces(const RootedMap& map);

// Intersection types that differ only in how their valency-2 faces are drawn
// (a shared 2-gon, a single shared edge, or a deep 2-face between parallel
// 2-gons) form one family: equal root valency and equal contracted map up to
// rotation. Families are numbered in order of first appearance.
struct IntersectionFamily {
  RootedMap core;                 // contracted map, minimal exterior rotation
  int root_valency = 0;
  std::vector<std::size_t> members;  // indices into the type list
};
std::vector<IntersectionFamily> group_intersection_families(const std::vector<IntersectionType>& types);

// Number of unordered intersecting pairs among the given occurrences.
std::size_t count_intersecting_pairs(const RootedMap& host, const std::vector<Occurrence>& occ);

}  // namespace pmaps
