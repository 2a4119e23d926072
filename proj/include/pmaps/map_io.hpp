#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pmaps/map.hpp"

namespace pmaps {

// Text format. A record is four fields, separated by any whitespace:
//
//   darts=<2m> sigma=<cycles> alpha=<cycles> root=<dart>
//
// where <cycles> is a sequence of parenthesised dart lists such as
// "(0 2)(1)(3)"; fixed points of sigma may be omitted. The atomic map is
// "darts=0 sigma=() alpha=() root=-1". A file holds any number of records;
// each "darts=" starts a new one. Lines starting with '#' are comments.
std::string format_map(const RootedMap& map, bool multiline = false);
RootedMap parse_map(const std::string& text);
std::vector<RootedMap> parse_maps(const std::string& text);
std::vector<RootedMap> read_map_file(const std::string& path);

// Binary cache format, version 1, little endian:
//   header: "PMAPBIN1" (8 bytes), u32 record count
//   record: u32 dart count D, D x u32 sigma, D x u32 alpha, i32 root
void write_binary_maps(std::ostream& out, const std::vector<RootedMap>& maps);
std::vector<RootedMap> read_binary_maps(std::istream& in);

}  // namespace pmaps
