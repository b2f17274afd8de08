#pragma once

#include <string>
#include <vector>

#include "clic/text/caption.hpp"
#include "clic/text/lexicon.hpp"
#include "clic/text/upos.hpp"

namespace clic {

struct Token {
    std::string surface;
    UposTag tag = UposTag::X;
    // Exact whitespace that preceded the token in the source; empty for
    // punctuation split off a word. Keeping it makes detokenize() an exact
    // inverse for any input spacing.
    std::string preceding;
    bool is_word = false; // false for split-off punctuation tokens
};

struct TaggedSentence {
    std::vector<Token> tokens;
    Sentence source;
    std::string trailing; // whitespace after the final token

    std::size_t word_count() const {
        std::size_t n = 0;
        for (const auto& t : tokens) n += t.is_word ? 1 : 0;
        return n;
    }
};

// Whitespace tokenization with leading/trailing ASCII punctuation split into
// separate PUNCT tokens. Interior punctuation (hyphens, apostrophes) stays
// inside the word. Word tokens are tagged via the lexicon.
TaggedSentence tag_sentence(const Sentence& sentence, const Lexicon& lexicon);

// Exact inverse of the tokenizer: concatenation of preceding + surface.
std::string detokenize(const TaggedSentence& s);

} // namespace clic
