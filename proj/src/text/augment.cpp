#include "clic/text/augment.hpp"

#include <algorithm>
#include <array>

#include "clic/error.hpp"
#include "clic/text/lexicon.hpp"

namespace clic {

std::string join_sentences(const Sentence& first, const Sentence& second) {
    return first + " " + second;
}

namespace {

// Word-token view of a sentence: positions of tokens eligible for swapping.
struct WordRef {
    std::size_t token_index;
    const std::string* surface;
    UposTag tag;
};

// Swap-eligible words: word tokens whose tag is not excluded and whose
// surface is not forbidden. Excluded tags stay out of the random fallback
// too, so a pair like "A cat." / "A cat." has no legal swap at all.
std::vector<WordRef> word_refs(const TaggedSentence& s, const WordSet& forbidden) {
    std::vector<WordRef> out;
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        const Token& t = s.tokens[i];
        if (!t.is_word) continue;
        if (is_swap_excluded(t.tag)) continue;
        if (forbidden.contains(to_lower_ascii(t.surface))) continue;
        out.push_back({i, &t.surface, t.tag});
    }
    return out;
}

std::vector<WordRef> with_tag(const std::vector<WordRef>& words, UposTag tag) {
    std::vector<WordRef> out;
    for (const auto& w : words)
        if (w.tag == tag) out.push_back(w);
    return out;
}

bool any_unequal(const std::vector<WordRef>& as, const std::vector<WordRef>& bs) {
    for (const auto& a : as)
        for (const auto& b : bs)
            if (*a.surface != *b.surface) return true;
    return false;
}

std::string swap_and_join(const TaggedSentence& sa, const TaggedSentence& sb, std::size_t ia,
                          std::size_t ib) {
    TaggedSentence ma = sa;
    TaggedSentence mb = sb;
    std::swap(ma.tokens[ia].surface, mb.tokens[ib].surface);
    return join_sentences(detokenize(ma), detokenize(mb));
}

} // namespace

PositiveSet make_positives(const Caption& cap_a, const Caption& cap_b, std::size_t k_extra,
                           Rng& rng) {
    PositiveSet out;
    out.p1 = join_sentences(cap_a.sentences.front(), cap_b.sentences.front());
    out.p2 = join_sentences(cap_b.sentences.front(), cap_a.sentences.front());

    if (k_extra == 0) return out;

    // Pool of non-first sentence indices; a one-sentence caption degrades to
    // reusing its first sentence.
    const auto make_pool = [&](const Caption& cap) {
        std::vector<std::size_t> pool;
        for (std::size_t i = 1; i < cap.sentences.size(); ++i) pool.push_back(i);
        if (pool.empty()) {
            pool.push_back(0);
            out.degraded = true;
        }
        return pool;
    };
    const std::vector<std::size_t> pool_a = make_pool(cap_a);
    const std::vector<std::size_t> pool_b = make_pool(cap_b);
    std::vector<std::size_t> unused_a = pool_a;
    std::vector<std::size_t> unused_b = pool_b;

    const auto draw = [&](std::vector<std::size_t>& unused, const std::vector<std::size_t>& pool) {
        if (!unused.empty()) {
            const std::size_t k = rng.uniform_index(unused.size());
            const std::size_t idx = unused[k];
            unused.erase(unused.begin() + static_cast<std::ptrdiff_t>(k));
            return idx;
        }
        out.degraded = true; // with-repetition fallback
        return pool[rng.uniform_index(pool.size())];
    };

    for (std::size_t e = 0; e < k_extra; ++e) {
        const Sentence& sent_a = cap_a.sentences[draw(unused_a, pool_a)];
        const Sentence& sent_b = cap_b.sentences[draw(unused_b, pool_b)];
        out.extras.push_back(rng.coin_flip() ? join_sentences(sent_b, sent_a)
                                             : join_sentences(sent_a, sent_b));
    }
    return out;
}

HardNegative make_hard_negative(const TaggedSentence& sa, const TaggedSentence& sb,
                                const WordSet& forbidden_words, Rng& rng) {
    const std::vector<WordRef> words_a = word_refs(sa, forbidden_words);
    const std::vector<WordRef> words_b = word_refs(sb, forbidden_words);

    // Tags present in both sentences, not swap-excluded, with at least one
    // pair of unequal surfaces. Enum order keeps the candidate list stable.
    std::vector<UposTag> candidate_tags;
    for (std::size_t t = 0; t < kUposCount; ++t) {
        const auto tag = static_cast<UposTag>(t);
        if (is_swap_excluded(tag)) continue;
        const auto as = with_tag(words_a, tag);
        const auto bs = with_tag(words_b, tag);
        if (!as.empty() && !bs.empty() && any_unequal(as, bs)) candidate_tags.push_back(tag);
    }

    if (!candidate_tags.empty()) {
        const UposTag tag = candidate_tags[rng.uniform_index(candidate_tags.size())];
        const auto as = with_tag(words_a, tag);
        const auto bs = with_tag(words_b, tag);
        std::vector<WordRef> eligible_a;
        for (const auto& a : as) {
            for (const auto& b : bs) {
                if (*a.surface != *b.surface) {
                    eligible_a.push_back(a);
                    break;
                }
            }
        }
        const WordRef chosen_a = eligible_a[rng.uniform_index(eligible_a.size())];
        std::vector<WordRef> eligible_b;
        for (const auto& b : bs)
            if (*b.surface != *chosen_a.surface) eligible_b.push_back(b);
        const WordRef chosen_b = eligible_b[rng.uniform_index(eligible_b.size())];
        return {swap_and_join(sa, sb, chosen_a.token_index, chosen_b.token_index),
                {chosen_a.token_index, chosen_b.token_index, tag}};
    }

    // No shared category: swap any unequal cross-sentence pair.
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& a : words_a)
        for (const auto& b : words_b)
            if (*a.surface != *b.surface) pairs.emplace_back(a.token_index, b.token_index);
    if (pairs.empty()) throw NoSwapPossible();
    const auto [ia, ib] = pairs[rng.uniform_index(pairs.size())];
    return {swap_and_join(sa, sb, ia, ib), {ia, ib, std::nullopt}};
}

HardNegative make_hard_negative_single(const TaggedSentence& s, const WordSet& forbidden_words,
                                       Rng& rng) {
    const std::vector<WordRef> words = word_refs(s, forbidden_words);

    std::vector<UposTag> candidate_tags;
    for (std::size_t t = 0; t < kUposCount; ++t) {
        const auto tag = static_cast<UposTag>(t);
        if (is_swap_excluded(tag)) continue;
        const auto ws = with_tag(words, tag);
        if (ws.size() >= 2 && any_unequal(ws, ws)) candidate_tags.push_back(tag);
    }

    const auto finish = [&](const WordRef& first, const WordRef& second,
                            std::optional<UposTag> tag) {
        TaggedSentence m = s;
        std::swap(m.tokens[first.token_index].surface, m.tokens[second.token_index].surface);
        return HardNegative{detokenize(m), {first.token_index, second.token_index, tag}};
    };

    if (!candidate_tags.empty()) {
        const UposTag tag = candidate_tags[rng.uniform_index(candidate_tags.size())];
        const auto ws = with_tag(words, tag);
        std::vector<WordRef> eligible;
        for (const auto& w : ws) {
            for (const auto& o : ws) {
                if (*w.surface != *o.surface) {
                    eligible.push_back(w);
                    break;
                }
            }
        }
        const WordRef first = eligible[rng.uniform_index(eligible.size())];
        std::vector<WordRef> partners;
        for (const auto& o : ws)
            if (*o.surface != *first.surface) partners.push_back(o);
        const WordRef second = partners[rng.uniform_index(partners.size())];
        return finish(first, second, tag);
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < words.size(); ++i)
        for (std::size_t j = i + 1; j < words.size(); ++j)
            if (*words[i].surface != *words[j].surface)
                pairs.emplace_back(words[i].token_index, words[j].token_index);
    if (pairs.empty()) throw NoSwapPossible("no unequal word pair within the sentence");
    const auto [ia, ib] = pairs[rng.uniform_index(pairs.size())];
    TaggedSentence m = s;
    std::swap(m.tokens[ia].surface, m.tokens[ib].surface);
    return {detokenize(m), {ia, ib, std::nullopt}};
}

} // namespace clic
