#pragma once

#include "msnet/curve_network.hpp"

#include <iosfwd>
#include <string>

namespace msnet {

/// Text snapshot of a network. Curve indices in junction lines are 1-based.
/// An optional trailing "sigma s1 ... sIC" line carries surface tensions.
void write_network(std::ostream& os, const CurveNetwork& network);
void write_network_file(const std::string& path, const CurveNetwork& network);

/// Parses and validates through build_network. Throws ParseError on malformed
/// text and IOError when the file cannot be opened.
CurveNetwork read_network(std::istream& is);
CurveNetwork read_network_file(const std::string& path);

}  // namespace msnet
