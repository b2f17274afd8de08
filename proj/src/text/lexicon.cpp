#include "clic/text/lexicon.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "clic/error.hpp"

namespace clic {

std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

namespace {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

UposTag parse_tag_or_throw(const std::string& token, const std::string& origin, std::size_t lineno) {
    const auto tag = parse_upos(token);
    if (!tag) {
        std::ostringstream os;
        os << origin << ":" << lineno << ": unknown POS tag '" << token << "'";
        throw ConfigError(os.str());
    }
    return *tag;
}

} // namespace

void Lexicon::add_entry(std::string word, UposTag tag) {
    entries_.emplace(to_lower_ascii(word), tag);
}

UposTag Lexicon::tag_of(const std::string& surface) const {
    const std::string key = to_lower_ascii(surface);
    if (const auto it = entries_.find(key); it != entries_.end()) return it->second;
    for (const auto& [suffix, tag] : suffix_rules_) {
        if (key.size() > suffix.size() &&
            key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0)
            return tag;
    }
    return default_tag_;
}

Lexicon Lexicon::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open lexicon file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path);
}

Lexicon Lexicon::parse(const std::string& text, const std::string& origin) {
    Lexicon lex;
    enum class Section { Entries, Suffix, Default } section = Section::Entries;

    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        if (stripped == "[suffix]") {
            section = Section::Suffix;
            continue;
        }
        if (stripped == "[default]") {
            section = Section::Default;
            continue;
        }
        if (section == Section::Default) {
            lex.default_tag_ = parse_tag_or_throw(stripped, origin, lineno);
            continue;
        }
        const std::size_t tab = stripped.find('\t');
        if (tab == std::string::npos) {
            std::ostringstream os;
            os << origin << ":" << lineno << ": expected 'word<TAB>TAG'";
            throw ConfigError(os.str());
        }
        const std::string word = trim(stripped.substr(0, tab));
        const std::string tag_token = trim(stripped.substr(tab + 1));
        const UposTag tag = parse_tag_or_throw(tag_token, origin, lineno);
        if (section == Section::Suffix) {
            if (word.empty() || word[0] != '-') {
                std::ostringstream os;
                os << origin << ":" << lineno << ": suffix rules must start with '-'";
                throw ConfigError(os.str());
            }
            lex.add_suffix_rule(to_lower_ascii(word.substr(1)), tag);
        } else {
            lex.add_entry(word, tag);
        }
    }
    return lex;
}

} // namespace clic
