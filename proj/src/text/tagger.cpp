#include "clic/text/tagger.hpp"

#include <cctype>

#include "clic/error.hpp"

namespace clic {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

} // namespace

TaggedSentence tag_sentence(const Sentence& sentence, const Lexicon& lexicon) {
    if (sentence.empty()) throw EmptyCaption("tag_sentence: empty sentence");

    TaggedSentence out;
    out.source = sentence;

    std::size_t i = 0;
    while (i < sentence.size()) {
        std::string preceding;
        while (i < sentence.size() && is_space(sentence[i])) preceding.push_back(sentence[i++]);
        if (i >= sentence.size()) {
            out.trailing = std::move(preceding);
            break;
        }

        std::size_t begin = i;
        while (i < sentence.size() && !is_space(sentence[i])) ++i;
        const std::string chunk = sentence.substr(begin, i - begin);

        // Split <leading punct><core><trailing punct>; the core keeps any
        // interior punctuation.
        std::size_t lead = 0;
        while (lead < chunk.size() && is_punct(chunk[lead])) ++lead;
        std::size_t tail = chunk.size();
        while (tail > lead && is_punct(chunk[tail - 1])) --tail;

        if (lead >= tail) {
            // chunk is all punctuation
            for (std::size_t k = 0; k < chunk.size(); ++k)
                out.tokens.push_back({std::string(1, chunk[k]), UposTag::PUNCT,
                                      k == 0 ? preceding : std::string(), false});
            continue;
        }
        for (std::size_t k = 0; k < lead; ++k)
            out.tokens.push_back({std::string(1, chunk[k]), UposTag::PUNCT,
                                  k == 0 ? preceding : std::string(), false});
        const std::string core = chunk.substr(lead, tail - lead);
        out.tokens.push_back({core, lexicon.tag_of(core),
                              lead == 0 ? preceding : std::string(), true});
        for (std::size_t k = tail; k < chunk.size(); ++k)
            out.tokens.push_back({std::string(1, chunk[k]), UposTag::PUNCT, std::string(), false});
    }
    return out;
}

std::string detokenize(const TaggedSentence& s) {
    std::string out;
    for (const auto& t : s.tokens) {
        out += t.preceding;
        out += t.surface;
    }
    out += s.trailing;
    return out;
}

} // namespace clic
