#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "valign/protocol.hpp"

namespace valign {

// Protocol files are JSON:
//   { "vocabulary": [...], "bound": n,
//     "constraints": [ { "template": "...", "n": k, "a": "A1:word", "b": "*:word" } ] }
std::string protocol_to_json(const Protocol& p);
Protocol protocol_from_json(const std::string& text);
Protocol load_protocol(const std::filesystem::path& path);
void save_protocol(const Protocol& p, const std::filesystem::path& path);

/// One line of an alignment file: `foreign,own[,value]`.
struct AlignmentLine {
  Word foreign;
  Word own;
  std::optional<double> value;
};

// Alignment files hold one `foreign,own[,value]` entry per line; blank lines
// and lines starting with '#' are ignored. Integer values are confidences of
// a prior alignment, real values are interpretation weights.
std::vector<AlignmentLine> read_alignment_lines(std::istream& in);
void write_alignment_lines(std::ostream& out, const std::vector<AlignmentLine>& lines);

AlignmentRelation load_alignment(const std::filesystem::path& path);
void save_alignment(const AlignmentRelation& a, const std::filesystem::path& path);

}  // namespace valign
