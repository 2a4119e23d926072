#include "pmaps/enumerate.hpp"

#include <algorithm>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <thread>

#include "pmaps/map_io.hpp"

namespace pmaps {

int EnumerationLimits::for_class(MapClass cls) const {
  switch (cls) {
    case MapClass::All: return all;
    case MapClass::Bipartite: return bipartite;
    case MapClass::TwoConnected: return two_connected;
  }
  return 0;
}

EnumerationRun::EnumerationRun(int n, MapClass cls, std::vector<std::uint8_t> flat)
    : n_(n), cls_(cls), count_(n == 0 ? (flat.empty() ? 0 : 1) : flat.size() / (2 * n)), flat_(std::move(flat)) {}

RootedMap EnumerationRun::map(std::size_t i) const {
  if (n_ == 0) return RootedMap::atomic();
  const std::uint8_t* s = sigma(i);
  return RootedMap::from_sigma(std::vector<Dart>(s, s + 2 * n_), 0);
}

CanonicalCode EnumerationRun::code(std::size_t i) const {
  CanonicalCode c;
  c.bytes.assign(reinterpret_cast<const char*>(sigma(i)), 2 * n_);
  return c;
}

void canonical_sigma(const std::vector<Dart>& sigma, Dart root, std::uint8_t* out) {
  const int n = static_cast<int>(sigma.size());
  if (n == 0) return;
  Dart label[256], order[256];
  std::fill(label, label + n, kNoDart);
  int next = 0;
  auto visit = [&](Dart d) {
    if (label[d] != kNoDart) return;
    label[d] = next;
    order[next++] = d;
    label[d ^ 1] = next;
    order[next++] = d ^ 1;
  };
  visit(root);
  for (int i = 0; i < next; ++i) visit(sigma[order[i]]);
  for (int i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(label[sigma[order[i]]]);
}

Enumerator::Enumerator(EnumerationOptions options) : options_(std::move(options)) {
  if (options_.threads < 1) options_.threads = 1;
}

const EnumerationRun& Enumerator::generate(int n, MapClass cls) {
  if (n < 0) throw MapError("map size must be non-negative");
  const int limit = options_.limits.for_class(cls);
  if (n > limit)
    throw ResourceLimitError("enumeration of " + to_string(cls) + " maps is limited to n <= " +
                             std::to_string(limit) + " (requested " + std::to_string(n) + ")");
  std::pair<int, int> key{n, static_cast<int>(cls)};
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = levels_.find(key);
    if (it != levels_.end()) return *it->second;
  }
  std::unique_ptr<EnumerationRun> run = load_cache(n, cls);
  if (!run) {
    run = build(n, cls);
    save_cache(*run);
  }
  std::lock_guard<std::mutex> lock(mutex_);
  auto [it, inserted] = levels_.emplace(key, std::move(run));
  return *it->second;
}

std::unique_ptr<EnumerationRun> Enumerator::build(int n, MapClass cls) {
  if (cls == MapClass::TwoConnected) return build_two_connected(n);
  return build_rooted_edge(n, cls);
}

namespace {

// Sorts fixed-width records and removes duplicates. Returns the number of
// duplicates dropped.
std::size_t sort_unique(std::vector<std::uint8_t>& flat, std::size_t width) {
  if (width == 0) return 0;
  const std::size_t count = flat.size() / width;
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  const std::uint8_t* base = flat.data();
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::memcmp(base + a * width, base + b * width, width) < 0;
  });
  std::vector<std::uint8_t> out;
  out.reserve(flat.size());
  std::size_t dropped = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const std::uint8_t* rec = base + idx[k] * width;
    if (k > 0 && std::memcmp(rec, base + idx[k - 1] * width, width) == 0) {
      ++dropped;
      continue;
    }
    out.insert(out.end(), rec, rec + width);
  }
  flat.swap(out);
  return dropped;
}

bool bipartite_sigma(const std::vector<Dart>& sigma) {
  // faces are orbits of d -> sigma[d ^ 1]; all must have even length
  const int n = static_cast<int>(sigma.size());
  std::vector<char> seen(n, 0);
  for (int d = 0; d < n; ++d) {
    if (seen[d]) continue;
    int len = 0;
    int e = d;
    do {
      seen[e] = 1;
      ++len;
      e = sigma[e ^ 1];
    } while (e != d);
    if (len % 2) return false;
  }
  return true;
}

template <typename Work>
void run_sharded(int threads, std::size_t items, std::vector<std::vector<std::uint8_t>>& out, Work work) {
  out.assign(threads, {});
  if (threads == 1) {
    for (std::size_t i = 0; i < items; ++i) work(i, out[0]);
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < items; i += threads) work(i, out[t]);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

// Root-edge construction: a map with n edges is either a root bridge joining
// two smaller maps, or a smaller map with a new root edge from its root corner
// to one of the k+1 corner slots of its root face (k = root face valency).
// Deleting the root edge of a bipartite map leaves bipartite maps, so the
// bipartite class is closed under this construction and is built in-class.
std::unique_ptr<EnumerationRun> Enumerator::build_rooted_edge(int n, MapClass cls) {
  const std::size_t width = 2 * static_cast<std::size_t>(n);
  if (n == 0) return std::make_unique<EnumerationRun>(0, cls, std::vector<std::uint8_t>{1});
  std::vector<const EnumerationRun*> lower(n);
  for (int k = 0; k < n; ++k) lower[k] = &generate(k, cls);
  const bool bip = cls == MapClass::Bipartite;
  const Dart r = static_cast<Dart>(2 * (n - 1));

  std::vector<std::vector<std::uint8_t>> shards;
  auto emit = [&](const std::vector<Dart>& sigma, std::vector<std::uint8_t>& out) {
    if (bip && !bipartite_sigma(sigma)) return;
    std::size_t at = out.size();
    out.resize(at + width);
    canonical_sigma(sigma, r, out.data() + at);
  };

  // Work items: parents of size n-1 (non-separating case), then pairs for the
  // bridge case indexed by (a, i) with b = n-1-a.
  const EnumerationRun& parents = *lower[n - 1];
  std::vector<std::size_t> bridge_offset(n + 1, 0);
  for (int a = 0; a < n; ++a) bridge_offset[a + 1] = bridge_offset[a] + lower[a]->size();
  const std::size_t items = parents.size() + bridge_offset[n];

  run_sharded(options_.threads, items, shards, [&](std::size_t item, std::vector<std::uint8_t>& out) {
    std::vector<Dart> sigma(width);
    if (item < parents.size()) {
      const int m = 2 * (n - 1);
      if (m == 0) {
        sigma = {1, 0};
        emit(sigma, out);
        return;
      }
      const std::uint8_t* ps = parents.sigma(item);
      std::vector<Dart> par(ps, ps + m), inv(m);
      for (int d = 0; d < m; ++d) inv[par[d]] = d;
      const Dart p = inv[0];
      // A: r' before r
      std::copy(par.begin(), par.end(), sigma.begin());
      sigma[p] = r + 1;
      sigma[r + 1] = r;
      sigma[r] = 0;
      emit(sigma, out);
      // B: r' between r and the old root
      std::copy(par.begin(), par.end(), sigma.begin());
      sigma[p] = r;
      sigma[r] = r + 1;
      sigma[r + 1] = 0;
      emit(sigma, out);
      // C: r' before every other dart of the root face
      for (Dart y = par[0 ^ 1]; y != 0; y = par[y ^ 1]) {
        std::copy(par.begin(), par.end(), sigma.begin());
        sigma[p] = r;
        sigma[r] = 0;
        Dart q = inv[y];
        if (q == p) q = r;
        sigma[q] = r + 1;
        sigma[r + 1] = y;
        emit(sigma, out);
      }
      return;
    }
    std::size_t rest = item - parents.size();
    int a = static_cast<int>(std::upper_bound(bridge_offset.begin(), bridge_offset.end(), rest) -
                             bridge_offset.begin()) - 1;
    std::size_t i = rest - bridge_offset[a];
    const int b = n - 1 - a;
    const EnumerationRun& right = *lower[b];
    const std::uint8_t* s1 = lower[a]->sigma(i);
    for (std::size_t j = 0; j < right.size(); ++j) {
      const std::uint8_t* s2 = right.sigma(j);
      for (int d = 0; d < 2 * a; ++d) sigma[d] = s1[d];
      for (int d = 0; d < 2 * b; ++d) sigma[2 * a + d] = s2[d] + 2 * a;
      if (a == 0) {
        sigma[r] = r;
      } else {
        Dart p1 = static_cast<Dart>(std::find(s1, s1 + 2 * a, 0) - s1);
        sigma[p1] = r;
        sigma[r] = 0;
      }
      if (b == 0) {
        sigma[r + 1] = r + 1;
      } else {
        Dart p2 = static_cast<Dart>(std::find(s2, s2 + 2 * b, 0) - s2) + 2 * a;
        sigma[p2] = r + 1;
        sigma[r + 1] = 2 * a;
      }
      emit(sigma, out);
    }
  });

  std::vector<std::uint8_t> flat;
  for (auto& s : shards) flat.insert(flat.end(), s.begin(), s.end());
  const std::size_t produced = flat.size() / width;
  const std::size_t dropped = sort_unique(flat, width);
  if (dropped != 0)
    throw std::logic_error("root-edge construction produced " + std::to_string(dropped) + " duplicates out of " +
                           std::to_string(produced));
  return std::make_unique<EnumerationRun>(n, cls, std::move(flat));
}

// Nonseparable maps with n >= 2 edges: cycles, plus maps obtained from a
// smaller nonseparable map by adding an ear (a path with fresh interior
// vertices) between two distinct vertices of one face. Every nonseparable
// map that is not a cycle has an ear whose removal leaves a nonseparable map,
// so this is complete; duplicates are removed by canonical code.
std::unique_ptr<EnumerationRun> Enumerator::build_two_connected(int n) {
  const std::size_t width = 2 * static_cast<std::size_t>(n);
  if (n < 2) return std::make_unique<EnumerationRun>(n, MapClass::TwoConnected, std::vector<std::uint8_t>{});

  auto all_rootings = [&](const std::vector<Dart>& sigma, std::vector<std::uint8_t>& out) {
    for (Dart root = 0; root < static_cast<Dart>(sigma.size()); ++root) {
      std::size_t at = out.size();
      out.resize(at + width);
      canonical_sigma(sigma, root, out.data() + at);
    }
  };

  std::vector<std::vector<std::uint8_t>> shards(1);
  {
    // the cycle with n edges: vertex i holds darts 2i (to i+1) and 2i-1 (from i-1)
    std::vector<Dart> sigma(width);
    for (int i = 0; i < n; ++i) {
      Dart out_d = 2 * i;
      Dart in_d = (2 * i - 1 + 2 * n) % (2 * n);
      sigma[out_d] = in_d;
      sigma[in_d] = out_d;
    }
    all_rootings(sigma, shards[0]);
  }

  std::vector<const EnumerationRun*> lower(n);
  for (int k = 2; k < n; ++k) lower[k] = &generate(k, MapClass::TwoConnected);
  std::vector<std::size_t> offset(n + 1, 0);
  for (int k = 0; k < n; ++k) offset[k + 1] = offset[k] + (k >= 2 ? lower[k]->size() : 0);

  std::vector<std::vector<std::uint8_t>> ears;
  run_sharded(options_.threads, offset[n], ears, [&](std::size_t item, std::vector<std::uint8_t>& out) {
    int k = static_cast<int>(std::upper_bound(offset.begin(), offset.end(), item) - offset.begin()) - 1;
    const EnumerationRun& run = *lower[k];
    std::size_t idx = item - offset[k];
    // only rooted at dart 0 would give repeats of the same unrooted parent;
    // the parent set contains every rooting, so restrict to one representative
    // per unrooted class: the rooting whose code is minimal.
    const std::uint8_t* ps = run.sigma(idx);
    const int m = 2 * k;
    std::vector<Dart> par(ps, ps + m);
    {
      std::vector<std::uint8_t> best(ps, ps + m), cur(m);
      for (Dart root = 1; root < m; ++root) {
        canonical_sigma(par, root, cur.data());
        if (cur < best) return;
      }
    }
    std::vector<Dart> inv(m), vert(m, -1), face(m, -1);
    for (int d = 0; d < m; ++d) inv[par[d]] = d;
    int nv = 0, nf = 0;
    for (int d = 0; d < m; ++d) {
      if (vert[d] < 0) {
        for (Dart e = d; vert[e] < 0; e = par[e]) vert[e] = nv;
        ++nv;
      }
      if (face[d] < 0) {
        for (Dart e = d; face[e] < 0; e = par[e ^ 1]) face[e] = nf;
        ++nf;
      }
    }
    const int len = n - k;  // ear length in edges
    // Corner "before y" lies in face[y]. Choose y1 < y2 in the same face at
    // distinct vertices; both orders give mirror-distinct paths only through
    // the corner choice, so unordered pairs suffice.
    for (Dart y1 = 0; y1 < m; ++y1)
      for (Dart y2 = y1 + 1; y2 < m; ++y2) {
        if (face[y1] != face[y2] || vert[y1] == vert[y2]) continue;
        std::vector<Dart> sigma(width);
        std::copy(par.begin(), par.end(), sigma.begin());
        // ear darts: edge j has darts m+2j (towards y2) and m+2j+1 (back)
        const Dart first = m, last = m + 2 * (len - 1) + 1;
        Dart q1 = inv[y1], q2 = inv[y2];
        sigma[q1] = first;
        sigma[first] = y1;
        sigma[q2] = last;
        sigma[last] = y2;
        for (int j = 0; j + 1 < len; ++j) {
          Dart in_d = m + 2 * j + 1;       // back dart of edge j, at interior vertex j
          Dart out_d = m + 2 * (j + 1);    // forward dart of edge j+1
          sigma[in_d] = out_d;
          sigma[out_d] = in_d;
        }
        all_rootings(sigma, out);
      }
  });
  for (auto& s : ears) shards.push_back(std::move(s));

  std::vector<std::uint8_t> flat;
  for (auto& s : shards) flat.insert(flat.end(), s.begin(), s.end());
  sort_unique(flat, width);
  return std::make_unique<EnumerationRun>(n, MapClass::TwoConnected, std::move(flat));
}

void Enumerator::for_each(const EnumerationRun& run,
                          const std::function<void(int, std::size_t, const RootedMap&)>& fn) const {
  const int threads = options_.threads;
  if (threads == 1) {
    for (std::size_t i = 0; i < run.size(); ++i) fn(0, i, run.map(i));
    return;
  }
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < run.size(); i += threads) fn(t, i, run.map(i));
    });
  for (auto& th : pool) th.join();
}

namespace {

std::string cache_path(const std::string& dir, int n, MapClass cls, const char* ext) {
  return dir + "/" + to_string(cls) + "_n" + std::to_string(n) + ext;
}

}  // namespace

std::unique_ptr<EnumerationRun> Enumerator::load_cache(int n, MapClass cls) const {
  if (options_.cache_dir.empty()) return nullptr;
  std::ifstream in(cache_path(options_.cache_dir, n, cls, ".pmapbin"), std::ios::binary);
  if (!in) return nullptr;
  auto maps = read_binary_maps(in);
  std::vector<std::uint8_t> flat(maps.size() * 2 * n);
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (maps[i].num_edges() != n) throw MapError("cache file holds a map of the wrong size");
    if (n > 0) canonical_sigma(maps[i].sigma_table(), maps[i].root(), flat.data() + i * 2 * n);
  }
  if (n == 0) flat = maps.empty() ? std::vector<std::uint8_t>{} : std::vector<std::uint8_t>{1};
  return std::make_unique<EnumerationRun>(n, cls, std::move(flat));
}

void Enumerator::save_cache(const EnumerationRun& run) const {
  if (options_.cache_dir.empty()) return;
  std::filesystem::create_directories(options_.cache_dir);
  std::vector<RootedMap> maps;
  maps.reserve(run.size());
  for (std::size_t i = 0; i < run.size(); ++i) maps.push_back(run.map(i));
  std::ofstream bin(cache_path(options_.cache_dir, run.n(), run.cls(), ".pmapbin"), std::ios::binary);
  write_binary_maps(bin, maps);
  std::ofstream txt(cache_path(options_.cache_dir, run.n(), run.cls(), ".maps"));
  txt << "# pmaps text v1: " << to_string(run.cls()) << " maps with " << run.n() << " edges\n";
  for (const auto& m : maps) txt << format_map(m) << '\n';
}

std::vector<CanonicalCode> brute_force_maps(int n) {
  const int d = 2 * n;
  std::set<CanonicalCode> codes;
  if (n == 0) return {CanonicalCode{}};
  std::vector<Dart> alpha(d, -1);
  std::vector<std::vector<Dart>> involutions;
  std::function<void()> pairings = [&] {
    int first = -1;
    for (int i = 0; i < d; ++i)
      if (alpha[i] < 0) {
        first = i;
        break;
      }
    if (first < 0) {
      involutions.push_back(alpha);
      return;
    }
    for (int j = first + 1; j < d; ++j) {
      if (alpha[j] >= 0) continue;
      alpha[first] = j;
      alpha[j] = first;
      pairings();
      alpha[first] = alpha[j] = -1;
    }
  };
  pairings();
  std::vector<Dart> sigma(d);
  std::iota(sigma.begin(), sigma.end(), 0);
  do {
    for (const auto& a : involutions) {
      for (Dart root = 0; root < d; ++root) {
        try {
          RootedMap m(sigma, a, root);
          codes.insert(m.canonical_code());
        } catch (const MapError&) {
        }
      }
    }
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return {codes.begin(), codes.end()};
}

}  // namespace pmaps
