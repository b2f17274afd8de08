#include "clic/text/caption.hpp"

#include <cctype>

#include "clic/error.hpp"
#include "clic/text/lexicon.hpp"

namespace clic {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

} // namespace

const std::vector<std::string>& default_strip_prefixes() {
    static const std::vector<std::string> prefixes = {
        "This picture depicts:",
        "This picture shows:",
        "This picture demonstrates:",
    };
    return prefixes;
}

std::string clean_caption(const RawCaption& raw, const std::vector<std::string>& prefixes) {
    std::string text = trim(raw.text);
    const std::string lowered = to_lower_ascii(text);
    for (const auto& prefix : prefixes) {
        const std::string lp = to_lower_ascii(prefix);
        if (lowered.size() >= lp.size() && lowered.compare(0, lp.size(), lp) == 0) {
            std::size_t pos = prefix.size();
            while (pos < text.size() && is_space(text[pos])) ++pos;
            text = text.substr(pos);
            break; // applied once
        }
    }
    text = trim(text);
    if (text.empty()) throw EmptyCaption("caption '" + raw.id + "' is empty after cleaning");
    return text;
}

Caption split_sentences(const std::string& text) {
    Caption caption;
    std::string current;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        current.push_back(c);
        const bool terminal = (c == '.' || c == '!' || c == '?');
        const bool boundary = terminal && (i + 1 == text.size() || is_space(text[i + 1]));
        if (boundary) {
            const std::string sentence = trim(current);
            if (!sentence.empty()) caption.sentences.push_back(sentence);
            current.clear();
        }
    }
    const std::string tail = trim(current);
    if (!tail.empty()) caption.sentences.push_back(tail);
    if (caption.sentences.empty()) throw EmptyCaption("no sentences in caption text");
    return caption;
}

} // namespace clic
