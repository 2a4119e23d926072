#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "pmaps/map.hpp"

namespace pmaps {

class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EnumerationLimits {
  int all = 9;
  int bipartite = 10;
  int two_connected = 11;

  int for_class(MapClass cls) const;
};

// All rooted maps of one size and class, stored compactly as canonical sigma
// tables (alpha pairs 2i with 2i+1, root dart 0), sorted by canonical code.
class EnumerationRun {
 public:
  EnumerationRun(int n, MapClass cls, std::vector<std::uint8_t> flat);

  int n() const { return n_; }
  MapClass cls() const { return cls_; }
  std::size_t size() const { return count_; }
  mpz_class total() const { return mpz_class(static_cast<unsigned long>(count_)); }

  RootedMap map(std::size_t i) const;
  CanonicalCode code(std::size_t i) const;
  // raw canonical sigma table of map i (2n entries)
  const std::uint8_t* sigma(std::size_t i) const { return flat_.data() + i * 2 * n_; }

  const std::vector<std::uint8_t>& flat() const { return flat_; }

 private:
  int n_;
  MapClass cls_;
  std::size_t count_;
  std::vector<std::uint8_t> flat_;
};

struct EnumerationOptions {
  EnumerationLimits limits;
  int threads = 1;
  std::string cache_dir;  // empty: no disk cache
};

// Generates maps level by level and memoises the levels, since the root-edge
// construction for size n needs every smaller size.
class Enumerator {
 public:
  explicit Enumerator(EnumerationOptions options = {});

  const EnumerationRun& generate(int n, MapClass cls);

  // Calls fn(index, map) for every map, split over the configured threads.
  // fn must only touch per-index or per-thread state.
  void for_each(const EnumerationRun& run,
                const std::function<void(int thread, std::size_t index, const RootedMap&)>& fn) const;

  int threads() const { return options_.threads; }
  const EnumerationOptions& options() const { return options_; }

 private:
  std::unique_ptr<EnumerationRun> build(int n, MapClass cls);
  std::unique_ptr<EnumerationRun> build_rooted_edge(int n, MapClass cls);
  std::unique_ptr<EnumerationRun> build_two_connected(int n);
  std::unique_ptr<EnumerationRun> load_cache(int n, MapClass cls) const;
  void save_cache(const EnumerationRun& run) const;

  EnumerationOptions options_;
  std::mutex mutex_;
  std::map<std::pair<int, int>, std::unique_ptr<EnumerationRun>> levels_;
};

// Canonical sigma table (alpha = xor 1, root 0) of the map given by a raw
// sigma table with alpha = xor 1 and the given root. out gets sigma.size()
// bytes.
void canonical_sigma(const std::vector<Dart>& sigma, Dart root, std::uint8_t* out);

// Every map with n edges produced by brute force over all (sigma, alpha)
// permutation pairs, deduplicated by canonical code. Only usable for tiny n;
// serves as an independent oracle for generate().
std::vector<CanonicalCode> brute_force_maps(int n);

}  // namespace pmaps
