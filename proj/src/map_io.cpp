#include "pmaps/map_io.hpp"

#include <cctype>
#include <cstring>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

namespace pmaps {

namespace {

std::string format_cycles(const std::vector<Dart>& perm, bool skip_fixed) {
  const int n = static_cast<int>(perm.size());
  if (n == 0) return "()";
  std::string out;
  std::vector<char> seen(n, 0);
  for (Dart d = 0; d < n; ++d) {
    if (seen[d]) continue;
    if (skip_fixed && perm[d] == d) {
      seen[d] = 1;
      continue;
    }
    out += '(';
    Dart e = d;
    bool first = true;
    do {
      seen[e] = 1;
      if (!first) out += ' ';
      out += std::to_string(e);
      first = false;
      e = perm[e];
    } while (e != d);
    out += ')';
  }
  return out.empty() ? "()" : out;
}

class Scanner {
 public:
  explicit Scanner(const std::string& s) : s_(s) {}

  void skip_space() {
    while (pos_ < s_.size()) {
      if (std::isspace(static_cast<unsigned char>(s_[pos_]))) {
        ++pos_;
      } else if (s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }
  bool done() {
    skip_space();
    return pos_ >= s_.size();
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string key() {
    skip_space();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_) fail("expected a field name");
    std::string k = s_.substr(start, pos_ - start);
    expect('=');
    return k;
  }
  int integer() {
    std::size_t start = pos_;
    if (peek() == '-') ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (start == pos_ || (pos_ == start + 1 && s_[start] == '-')) fail("expected an integer");
    return std::stoi(s_.substr(start, pos_ - start));
  }
  std::vector<std::vector<int>> cycles() {
    std::vector<std::vector<int>> out;
    while (peek() == '(') {
      ++pos_;
      std::vector<int> cyc;
      for (;;) {
        while (peek() == ' ' || peek() == '\t' || peek() == ',') ++pos_;
        if (peek() == ')') break;
        cyc.push_back(integer());
      }
      ++pos_;
      if (!cyc.empty()) out.push_back(std::move(cyc));
    }
    return out;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw MapError("map text, offset " + std::to_string(pos_) + ": " + what);
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

struct Record {
  std::optional<int> darts, root;
  std::optional<std::vector<std::vector<int>>> sigma, alpha;

  bool empty() const { return !darts && !root && !sigma && !alpha; }

  RootedMap build() const {
    if (!darts || !sigma || !alpha || !root) throw MapError("map record is missing a field");
    const int n = *darts;
    if (n < 0) throw MapError("negative dart count");
    auto to_perm = [n](const std::vector<std::vector<int>>& cyc, const char* name) {
      std::vector<Dart> perm(n);
      std::vector<char> seen(n, 0);
      for (int d = 0; d < n; ++d) perm[d] = d;
      for (const auto& c : cyc)
        for (std::size_t i = 0; i < c.size(); ++i) {
          int d = c[i];
          if (d < 0 || d >= n) throw MapError(std::string(name) + ": dart out of range");
          if (seen[d]) throw MapError(std::string(name) + ": dart listed twice");
          seen[d] = 1;
          perm[d] = c[(i + 1) % c.size()];
        }
      return perm;
    };
    for (const auto& c : *alpha)
      if (c.size() != 2) throw MapError("alpha: cycles must be pairs");
    return RootedMap(to_perm(*sigma, "sigma"), to_perm(*alpha, "alpha"), *root);
  }
};

}  // namespace

std::string format_map(const RootedMap& map, bool multiline) {
  const char sep = multiline ? '\n' : ' ';
  std::string out = "darts=" + std::to_string(map.num_darts());
  out += sep;
  out += "sigma=" + format_cycles(map.sigma_table(), true);
  out += sep;
  out += "alpha=" + format_cycles(map.alpha_table(), false);
  out += sep;
  out += "root=" + std::to_string(map.root());
  return out;
}

std::vector<RootedMap> parse_maps(const std::string& text) {
  std::vector<RootedMap> maps;
  Scanner sc(text);
  Record rec;
  while (!sc.done()) {
    std::string k = sc.key();
    if (k == "darts") {
      if (!rec.empty()) maps.push_back(rec.build());
      rec = Record{};
      rec.darts = sc.integer();
    } else if (k == "sigma") {
      rec.sigma = sc.cycles();
    } else if (k == "alpha") {
      rec.alpha = sc.cycles();
    } else if (k == "root") {
      rec.root = sc.integer();
    } else {
      sc.fail("unknown field '" + k + "'");
    }
  }
  if (!rec.empty()) maps.push_back(rec.build());
  return maps;
}

RootedMap parse_map(const std::string& text) {
  auto maps = parse_maps(text);
  if (maps.size() != 1) throw MapError("expected exactly one map, found " + std::to_string(maps.size()));
  return maps.front();
}

std::vector<RootedMap> read_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MapError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_maps(ss.str());
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw MapError("binary map file truncated");
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

constexpr char kMagic[9] = "PMAPBIN1";

}  // namespace

void write_binary_maps(std::ostream& out, const std::vector<RootedMap>& maps) {
  out.write(kMagic, 8);
  put_u32(out, static_cast<std::uint32_t>(maps.size()));
  for (const auto& m : maps) {
    put_u32(out, static_cast<std::uint32_t>(m.num_darts()));
    for (Dart d : m.sigma_table()) put_u32(out, static_cast<std::uint32_t>(d));
    for (Dart d : m.alpha_table()) put_u32(out, static_cast<std::uint32_t>(d));
    put_u32(out, static_cast<std::uint32_t>(m.root()));
  }
}

std::vector<RootedMap> read_binary_maps(std::istream& in) {
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
    throw MapError("not a PMAPBIN1 file");
  std::uint32_t count = get_u32(in);
  std::vector<RootedMap> maps;
  maps.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint32_t n = get_u32(in);
    std::vector<Dart> sigma(n), alpha(n);
    for (auto& d : sigma) d = static_cast<Dart>(get_u32(in));
    for (auto& d : alpha) d = static_cast<Dart>(get_u32(in));
    auto root = static_cast<Dart>(static_cast<std::int32_t>(get_u32(in)));
    maps.emplace_back(std::move(sigma), std::move(alpha), root);
  }
  return maps;
}

}  // namespace pmaps
