#include "pmaps/pattern.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <set>
#include <unordered_map>

namespace pmaps {

Pattern Pattern::from_map(RootedMap map) {
  if (map.num_edges() == 0) throw UsageError("a pattern needs at least one edge");
  Pattern p;
  p.map = std::move(map);
  p.edges = p.map.num_edges();
  p.boundary_length = p.map.root_face_valency();
  std::vector<int> visits(p.map.num_vertices(), 0);
  for (Dart d : p.map.root_boundary()) ++visits[p.map.vertex_of(d)];
  for (int v = 0; v < p.map.num_vertices(); ++v)
    if (visits[v] >= 2) p.pinch_points.push_back(v);
  for (int f = 0; f < p.map.num_faces(); ++f)
    if (f != p.map.root_face()) p.interior_faces.push_back(f);
  p.rotations = rotations_of(p);
  return p;
}

int rotations_of(const Pattern& p) {
  std::set<CanonicalCode> codes;
  for (Dart d : p.map.root_boundary()) codes.insert(p.map.rerooted(d).canonical_code());
  return static_cast<int>(codes.size());
}

Pattern fly_pattern() {
  return Pattern::from_map(RootedMap({2, 3, 4, 1, 6, 7, 0, 5}, {1, 0, 3, 2, 5, 4, 7, 6}, 0));
}

Pattern digon_pattern() { return Pattern::from_map(RootedMap({2, 3, 0, 1}, {1, 0, 3, 2}, 0)); }

std::size_t host_fingerprint(const RootedMap& host) {
  std::size_t h = std::hash<std::string>{}(host.canonical_code().bytes);
  for (Dart d : host.sigma_table()) h = h * 1000003u ^ static_cast<std::size_t>(d);
  return h ^ static_cast<std::size_t>(host.root() + 7);
}

namespace {

class Matcher {
 public:
  Matcher(const RootedMap& host, const Pattern& p) : h_(host), p_(p) {
    const int pd = p.map.num_darts();
    interior_.assign(pd, 0);
    for (Dart d = 0; d < pd; ++d) interior_[d] = p.map.face_of(d) != p.map.root_face();
    host_pos_.assign(host.num_darts(), 0);
    std::vector<char> seen(host.num_darts(), 0);
    for (Dart d = 0; d < host.num_darts(); ++d) {
      if (seen[d]) continue;
      int k = 0;
      for (Dart e = d; !seen[e]; e = host.sigma(e)) {
        seen[e] = 1;
        host_pos_[e] = k++;
      }
    }
  }

  std::vector<Occurrence> run() {
    const int pd = p_.map.num_darts();
    f_.assign(pd, kNoDart);
    used_.assign(h_.num_darts(), 0);
    vmap_.assign(p_.map.num_vertices(), -1);
    vused_.assign(h_.num_vertices(), -1);
    const std::size_t fp = host_fingerprint(h_);
    for (Dart h = 0; h < h_.num_darts(); ++h) {
      std::vector<std::pair<Dart, Dart>> undo;
      if (assign_edge(p_.map.root(), h, undo)) extend();
      rollback(undo);
    }
    std::sort(found_.begin(), found_.end(), [](const Occurrence& a, const Occurrence& b) {
      return std::tie(a.dart_image, a.interior_faces) < std::tie(b.dart_image, b.interior_faces);
    });
    found_.erase(std::unique(found_.begin(), found_.end()), found_.end());
    for (auto& o : found_) o.host_fingerprint = fp;
    return std::move(found_);
  }

 private:
  bool assign_one(Dart d, Dart h, std::vector<std::pair<Dart, Dart>>& undo) {
    if (f_[d] != kNoDart) return f_[d] == h;
    if (used_[h]) return false;
    int pv = p_.map.vertex_of(d), hv = h_.vertex_of(h);
    if (vmap_[pv] >= 0) {
      if (vmap_[pv] != hv) return false;
    } else {
      if (vused_[hv] >= 0) return false;
      vmap_[pv] = hv;
      vused_[hv] = pv;
      undo.push_back({-1 - pv, hv});
    }
    f_[d] = h;
    used_[h] = 1;
    undo.push_back({d, h});
    return true;
  }

  bool assign_edge(Dart d, Dart h, std::vector<std::pair<Dart, Dart>>& undo) {
    return assign_one(d, h, undo) && assign_one(p_.map.alpha(d), h_.alpha(h), undo);
  }

  void rollback(std::vector<std::pair<Dart, Dart>>& undo) {
    for (auto it = undo.rbegin(); it != undo.rend(); ++it) {
      if (it->first < 0) {
        int pv = -1 - it->first;
        vmap_[pv] = -1;
        vused_[it->second] = -1;
      } else {
        f_[it->first] = kNoDart;
        used_[it->second] = 0;
      }
    }
    undo.clear();
  }

  void extend() {
    const int pd = p_.map.num_darts();
    Dart next = kNoDart;
    for (Dart d = 0; d < pd; ++d)
      if (f_[d] != kNoDart && f_[p_.map.sigma(d)] == kNoDart) {
        next = d;
        break;
      }
    if (next == kNoDart) {
      finish();
      return;
    }
    const Dart target = p_.map.sigma(next);
    const Dart from = f_[next];
    if (interior_[target]) {
      std::vector<std::pair<Dart, Dart>> undo;
      if (assign_edge(target, h_.sigma(from), undo)) extend();
      rollback(undo);
      return;
    }
    for (Dart h = h_.sigma(from); h != from; h = h_.sigma(h)) {
      std::vector<std::pair<Dart, Dart>> undo;
      if (assign_edge(target, h, undo)) extend();
      rollback(undo);
    }
  }

  void finish() {
    const int pd = p_.map.num_darts();
    // cyclic order at every pattern vertex must wind exactly once
    std::vector<char> done(pd, 0);
    for (Dart d = 0; d < pd; ++d) {
      if (done[d]) continue;
      int deg = h_.degree(h_.vertex_of(f_[d]));
      int total = 0;
      Dart e = d;
      do {
        done[e] = 1;
        Dart s = p_.map.sigma(e);
        int step = (host_pos_[f_[s]] - host_pos_[f_[e]] + deg) % deg;
        total += step == 0 ? deg : step;
        e = s;
      } while (e != d);
      if (total != deg) return;
    }
    Occurrence o;
    o.embedding = f_;
    std::set<int> faces;
    for (Dart d = 0; d < pd; ++d) {
      if (!interior_[d]) continue;
      if (h_.phi(f_[d]) != f_[p_.map.phi(d)]) return;
      faces.insert(h_.face_of(f_[d]));
    }
    if (faces.count(h_.root_face())) return;
    o.interior_faces.assign(faces.begin(), faces.end());
    o.dart_image = f_;
    std::sort(o.dart_image.begin(), o.dart_image.end());
    found_.push_back(std::move(o));
  }

  const RootedMap& h_;
  const Pattern& p_;
  std::vector<char> interior_;
  std::vector<int> host_pos_;
  std::vector<Dart> f_;
  std::vector<char> used_;
  std::vector<int> vmap_, vused_;
  std::vector<Occurrence> found_;
};

}  // namespace

std::vector<Occurrence> find_occurrences(const RootedMap& host, const Pattern& p) {
  if (host.num_darts() < p.map.num_darts()) return {};
  return Matcher(host, p).run();
}

std::size_t count_occurrences(const RootedMap& host, const Pattern& p) { return find_occurrences(host, p).size(); }

namespace {

bool intersect_unchecked(const RootedMap& host, const Occurrence& a, const Occurrence& b) {
  if (a == b) return true;
  std::vector<int> fa = a.interior_faces;
  for (int f : b.interior_faces)
    if (std::binary_search(fa.begin(), fa.end(), f)) return true;
  // owner bits per host dart: 1 = a, 2 = b
  std::vector<int> owner(host.num_darts(), 0);
  std::vector<char> va(host.num_vertices(), 0), vb(host.num_vertices(), 0);
  for (Dart d : a.dart_image) {
    owner[d] |= 1;
    va[host.vertex_of(d)] = 1;
  }
  for (Dart d : b.dart_image) {
    owner[d] |= 2;
    vb[host.vertex_of(d)] = 1;
  }
  std::vector<char> seen(host.num_darts(), 0);
  for (Dart d = 0; d < host.num_darts(); ++d) {
    if (seen[d]) continue;
    int v = host.vertex_of(d);
    std::vector<int> pure;
    Dart e = d;
    do {
      seen[e] = 1;
      if (owner[e] == 1 || owner[e] == 2) pure.push_back(owner[e]);
      e = host.sigma(e);
    } while (e != d);
    if (!va[v] || !vb[v]) continue;
    int changes = 0;
    for (std::size_t i = 0; i < pure.size(); ++i)
      if (pure[i] != pure[(i + 1) % pure.size()]) ++changes;
    if (changes > 2) return true;
  }
  return false;
}

}  // namespace

bool occurrences_intersect(const RootedMap& host, const Occurrence& a, const Occurrence& b) {
  const std::size_t fp = host_fingerprint(host);
  if (a.host_fingerprint != fp || b.host_fingerprint != fp)
    throw UsageError("occurrences_intersect: occurrences belong to a different host");
  return intersect_unchecked(host, a, b);
}

std::size_t count_intersecting_pairs(const RootedMap& host, const std::vector<Occurrence>& occ) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < occ.size(); ++i)
    for (std::size_t j = i + 1; j < occ.size(); ++j)
      if (intersect_unchecked(host, occ[i], occ[j])) ++count;
  return count;
}

namespace {

struct ConfigKey {
  CanonicalCode code;
  std::vector<std::vector<Dart>> pair;  // the two relabeled dart images, sorted
  friend bool operator<(const ConfigKey& x, const ConfigKey& y) {
    return std::tie(x.code, x.pair) < std::tie(y.code, y.pair);
  }
  friend bool operator==(const ConfigKey& x, const ConfigKey& y) {
    return x.code == y.code && x.pair == y.pair;
  }
};

// Relabeling used by canonical_form(), as old -> new.
std::vector<Dart> canonical_labels(const RootedMap& m) {
  const int n = m.num_darts();
  std::vector<Dart> label(n, kNoDart), order;
  auto visit = [&](Dart d) {
    if (label[d] != kNoDart) return;
    label[d] = static_cast<Dart>(order.size());
    order.push_back(d);
    label[m.alpha(d)] = static_cast<Dart>(order.size());
    order.push_back(m.alpha(d));
  };
  visit(m.root());
  for (std::size_t i = 0; i < order.size(); ++i) visit(m.sigma(order[i]));
  return label;
}

ConfigKey config_key(const RootedMap& m, const Occurrence& a, const Occurrence& b) {
  ConfigKey k{m.canonical_code(), {}};
  auto label = canonical_labels(m);
  for (const Occurrence* o : {&a, &b}) {
    std::vector<Dart> img;
    for (Dart d : o->dart_image) img.push_back(label[d]);
    std::sort(img.begin(), img.end());
    k.pair.push_back(std::move(img));
  }
  std::sort(k.pair.begin(), k.pair.end());
  return k;
}

}  // namespace

std::vector<IntersectionType> enumerate_intersection_types(const Pattern& p, MapClass cls, int max_edges,
                                                           Enumerator& enumerator) {
  std::map<ConfigKey, IntersectionType> types;
  std::mutex mu;
  for (int n = p.edges; n <= max_edges; ++n) {
    const EnumerationRun& run = enumerator.generate(n, cls);
    std::vector<std::map<ConfigKey, IntersectionType>> local(enumerator.threads());
    enumerator.for_each(run, [&](int t, std::size_t, const RootedMap& m) {
      auto occ = find_occurrences(m, p);
      for (std::size_t i = 0; i < occ.size(); ++i)
        for (std::size_t j = i + 1; j < occ.size(); ++j) {
          const Occurrence &a = occ[i], &b = occ[j];
          std::vector<Dart> uni;
          std::set_union(a.dart_image.begin(), a.dart_image.end(), b.dart_image.begin(), b.dart_image.end(),
                         std::back_inserter(uni));
          if (static_cast<int>(uni.size()) != m.num_darts()) continue;
          if (!intersect_unchecked(m, a, b)) continue;
          // only handle the configuration from its minimal rotation
          ConfigKey own = config_key(m, a, b);
          std::set<ConfigKey> rotations{own};
          bool minimal = true;
          for (Dart d : m.root_boundary()) {
            if (d == m.root()) continue;
            RootedMap rm = m.rerooted(d);
            ConfigKey k = config_key(rm, a, b);
            if (k < own) {
              minimal = false;
              break;
            }
            rotations.insert(std::move(k));
          }
          if (!minimal) continue;
          IntersectionType type;
          type.representative = m.canonical_form();
          auto label = canonical_labels(m);
          auto relabel = [&](const Occurrence& o) {
            Occurrence r;
            for (Dart d : o.embedding) r.embedding.push_back(label[d]);
            r.dart_image = r.embedding;
            std::sort(r.dart_image.begin(), r.dart_image.end());
            std::set<int> faces;
            for (Dart d : o.dart_image)
              if (std::binary_search(o.interior_faces.begin(), o.interior_faces.end(), m.face_of(d)))
                faces.insert(type.representative.face_of(label[d]));
            r.interior_faces.assign(faces.begin(), faces.end());
            r.host_fingerprint = host_fingerprint(type.representative);
            return r;
          };
          type.occ_pair = {relabel(a), relabel(b)};
          if (type.occ_pair.second.dart_image < type.occ_pair.first.dart_image)
            std::swap(type.occ_pair.first, type.occ_pair.second);
          type.rotations = static_cast<int>(rotations.size());
          type.edges = m.num_edges();
          type.root_valency = m.root_face_valency();
          for (int f = 0; f < m.num_faces(); ++f) {
            if (f == m.root_face()) continue;
            bool in_a = std::binary_search(a.interior_faces.begin(), a.interior_faces.end(), f);
            bool in_b = std::binary_search(b.interior_faces.begin(), b.interior_faces.end(), f);
            if (!in_a && !in_b) ++type.deep_faces[m.face_valency(f)];
          }
          local[t].emplace(std::move(own), std::move(type));
        }
    });
    for (auto& l : local)
      for (auto& [k, v] : l) types.emplace(k, std::move(v));
  }
  std::vector<IntersectionType> out;
  for (auto& [k, v] : types) out.push_back(std::move(v));
  return out;
}

RootedMap contract_two_faces(const RootedMap& map) {
  RootedMap m = map;
  for (;;) {
    Dart d1 = kNoDart;
    for (Dart d = 0; d < m.num_darts() && d1 == kNoDart; ++d) {
      if (m.face_of(d) == m.root_face() || m.face_valency(m.face_of(d)) != 2) continue;
      if (m.phi(d) != m.alpha(d)) d1 = d;
    }
    if (d1 == kNoDart) return m;
    const Dart d2 = m.phi(d1);
    const int n = m.num_darts();
    std::vector<Dart> label(n, kNoDart);
    Dart next = 0;
    for (Dart d = 0; d < n; ++d)
      if (d != d1 && d != d2) label[d] = next++;
    std::vector<Dart> sigma(next), alpha(next);
    for (Dart d = 0; d < n; ++d) {
      if (d == d1 || d == d2) continue;
      Dart s = m.sigma(d);
      while (s == d1 || s == d2) s = m.sigma(s);
      sigma[label[d]] = label[s];
      Dart a = m.alpha(d);
      if (a == d1) a = m.alpha(d2);
      else if (a == d2) a = m.alpha(d1);
      alpha[label[d]] = label[a];
    }
    m = RootedMap(std::move(sigma), std::move(alpha), label[m.root()]);
  }
}

std::vector<IntersectionFamily> group_intersection_families(const std::vector<IntersectionType>& types) {
  std::vector<IntersectionFamily> out;
  std::vector<CanonicalCode> keys;
  for (std::size_t i = 0; i < types.size(); ++i) {
    const RootedMap core = contract_two_faces(types[i].representative);
    RootedMap best = core.canonical_form();
    for (Dart d : core.root_boundary()) {
      RootedMap r = core.rerooted(d).canonical_form();
      if (r.canonical_code() < best.canonical_code()) best = std::move(r);
    }
    const CanonicalCode key = best.canonical_code();
    const int v = types[i].root_valency;
    std::size_t f = 0;
    while (f < out.size() && !(keys[f] == key && out[f].root_valency == v)) ++f;
    if (f == out.size()) {
      out.push_back({best, v, {}});
      keys.push_back(key);
    }
    out[f].members.push_back(i);
  }
  return out;
}

}  // namespace pmaps
