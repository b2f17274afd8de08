#pragma once

#include <string>
#include <vector>

namespace clic {

struct RawCaption {
    std::string id;
    std::string text;
};

using Sentence = std::string;

// A caption split into sentences. Terminal punctuation stays attached to its
// sentence; no sentence is empty.
struct Caption {
    std::vector<Sentence> sentences;
};

// Default prefixes stripped from generated captions.
const std::vector<std::string>& default_strip_prefixes();

// Removes at most one leading prefix (case-insensitive, whitespace after the
// prefix absorbed) and trims outer whitespace. Throws EmptyCaption when
// nothing remains.
std::string clean_caption(const RawCaption& raw, const std::vector<std::string>& prefixes);

// Splits on {. ! ?} followed by whitespace or end of string. Abbreviations
// are not special-cased. Throws EmptyCaption when no sentence results.
Caption split_sentences(const std::string& text);

} // namespace clic
