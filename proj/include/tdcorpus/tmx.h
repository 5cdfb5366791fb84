#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tdcorpus/aligner.h"

namespace tdcorpus::tmx {

inline constexpr const char* kSourceLang = "pt";
inline constexpr const char* kTargetLang = "en";

/// Writes a TMX 1.4b document: one <tu> per pair carrying "doc_id" and
/// "bead_kind" properties and a pt and an en <tuv>. Pairs are written in
/// the order given. Throws IoError, or Error for text that XML 1.0 cannot
/// represent.
void write_tmx(const std::vector<AlignedPair>& pairs, const std::filesystem::path& path);
std::string to_tmx(const std::vector<AlignedPair>& pairs);

struct ReadResult {
  std::vector<AlignedPair> pairs;  // cost is not stored and reads as 0
  std::vector<std::string> warnings;
};

/// Inverse of write_tmx. Malformed markup throws ParseError with the line;
/// units without both a pt and an en variant, or with a variant in another
/// language, are skipped with a warning.
ReadResult read_tmx(const std::filesystem::path& path);
ReadResult parse_tmx(const std::string& document);

/// Structural problems of a TMX file; empty when valid.
std::vector<std::string> validate_tmx(const std::filesystem::path& path);
std::vector<std::string> validate_tmx_text(const std::string& document);

}  // namespace tdcorpus::tmx
