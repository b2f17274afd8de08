#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace clic {

// The 17 universal part-of-speech tags.
enum class UposTag : unsigned char {
    ADJ,
    ADP,
    ADV,
    AUX,
    CCONJ,
    DET,
    INTJ,
    NOUN,
    NUM,
    PART,
    PRON,
    PROPN,
    PUNCT,
    SCONJ,
    SYM,
    VERB,
    X,
};

inline constexpr std::size_t kUposCount = 17;

inline constexpr std::array<std::string_view, kUposCount> kUposNames = {
    "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
    "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X",
};

inline std::string_view to_string(UposTag t) { return kUposNames[static_cast<std::size_t>(t)]; }

inline std::optional<UposTag> parse_upos(std::string_view s) {
    for (std::size_t i = 0; i < kUposCount; ++i)
        if (kUposNames[i] == s) return static_cast<UposTag>(i);
    return std::nullopt;
}

// Tags that never participate in word swapping.
inline bool is_swap_excluded(UposTag t) {
    switch (t) {
        case UposTag::AUX:
        case UposTag::CCONJ:
        case UposTag::DET:
        case UposTag::INTJ:
        case UposTag::PART:
        case UposTag::PUNCT:
        case UposTag::SCONJ:
        case UposTag::SYM:
        case UposTag::X:
            return true;
        default:
            return false;
    }
}

} // namespace clic
