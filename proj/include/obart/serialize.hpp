#pragma once

#include <iosfwd>
#include <string>

#include "obart/tree.hpp"

namespace obart {

// Text serialization of one ensemble draw:
//   obliquebart v1
//   config <M> <p_cont> <p_cat> <mode> <alpha> <beta> <tau> <nu> <lambda>
//          <a_theta> <b_theta> <prob_categorical> <sigma2> <theta>
//   one line per tree, node records in pre-order:
//     D <c> <phi_0> ... <phi_{p_cont-1}>   continuous decision
//     K <j> <m> <code_1> ... <code_m>      categorical decision
//     L <mu>                               leaf
// All reals are written with 17 significant digits and round-trip exactly.

void write_ensemble(std::ostream& os, const FrozenEnsemble& e);
FrozenEnsemble read_ensemble(std::istream& is);

// %.17g formatting used everywhere a double enters a text artifact.
std::string fmt_double(double v);
double parse_double(const std::string& tok);  // throws on trailing garbage

// Whitespace/percent-safe encoding for free-form strings (column names,
// categorical level labels) embedded in line-oriented files.
std::string escape_token(const std::string& s);
std::string unescape_token(const std::string& s);

}  // namespace obart
