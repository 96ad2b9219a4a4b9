#pragma once

#include <string>
#include <variant>

#include "cqcode/channels.hpp"
#include "cqcode/infomeasure.hpp"
#include "cqcode/typeclasses.hpp"

namespace cqcode {

// Channel JSON schema:
//   {"kind":"cq"|"mac", "a_size":int, "b_size":int(optional), "out_dim":int,
//    "states":[ [[ [re,im], ...cols ], ...rows ], ... ]}
// with states row-major over a (cq) or (a,b) with b fastest (mac).
using AnyChannel = std::variant<CQChannel, MACChannel>;

AnyChannel channel_from_json_text(const std::string& text);
std::string channel_to_json_text(const CQChannel& w);
std::string channel_to_json_text(const MACChannel& w);

// Family JSON schema:
//   {"kind":"compound", "family_kind":"mac"|"bcd", "members":[...]}
// where a mac member is a channel object and a bcd member is
//   {"w_y": channel, "w_z": channel}.
// Also accepts a bare channel object (singleton MAC family) and a bare
//   {"kind":"bcd", "w_y":..., "w_z":...} pair (singleton BCD family).
CompoundFamily family_from_json_text(const std::string& text);
std::string family_to_json_text(const CompoundFamily& fam);

// Distribution JSON schema: {"p_t":[...], "p_a_t":[[...]], "p_b_t":[[...]]}
// (p_b_t optional: defaults to the singleton column for P_UX inputs).
MarkovTriple triple_from_json_text(const std::string& text);
std::string triple_to_json_text(const MarkovTriple& m);

// PackedCode JSON: {"setting":..., "n":..., "codewords":[[ints]],
// "margins":{...}, "seed":int} plus structure fields per setting.
std::string packed_code_to_json_text(const PackedCode& code);
PackedCode packed_code_from_json_text(const std::string& text);

// File helpers (throw ParseError on I/O or schema trouble).
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace cqcode
