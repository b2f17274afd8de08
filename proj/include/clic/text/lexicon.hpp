#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "clic/text/upos.hpp"

namespace clic {

// Deterministic word -> tag lookup backed by an exact-match table plus an
// ordered suffix-rule list. Lookup is total: the default tag backstops
// everything. File format (UTF-8):
//
//   # comment
//   word<TAB>TAG          entries (word stored lowercased)
//   [suffix]
//   -ly<TAB>ADV           suffix rules, tried in file order
//   [default]
//   NOUN                  default tag (X when the section is absent)
class Lexicon {
public:
    Lexicon() = default;
    explicit Lexicon(UposTag default_tag) : default_tag_(default_tag) {}

    static Lexicon load(const std::string& path);
    static Lexicon parse(const std::string& text, const std::string& origin = "<string>");

    void add_entry(std::string word, UposTag tag);
    void add_suffix_rule(std::string suffix, UposTag tag) {
        suffix_rules_.emplace_back(std::move(suffix), tag);
    }
    void set_default_tag(UposTag t) { default_tag_ = t; }

    // Exact lowercased lookup, then the first matching suffix rule, then the
    // default tag. Never fails.
    UposTag tag_of(const std::string& surface) const;

    std::size_t size() const { return entries_.size(); }
    UposTag default_tag() const { return default_tag_; }

private:
    std::unordered_map<std::string, UposTag> entries_;
    std::vector<std::pair<std::string, UposTag>> suffix_rules_;
    UposTag default_tag_ = UposTag::X;
};

std::string to_lower_ascii(std::string_view s);

} // namespace clic
