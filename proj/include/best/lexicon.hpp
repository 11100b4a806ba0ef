#pragma once
#include <fstream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "best/errors.hpp"
#include "best/scene_graph.hpp"
#include "best/text.hpp"

namespace best {

// Deterministic suffix-table lemmatizer: plural -s/-es/-ies plus -ing/-ed
// verb forms. First matching rule wins; no morphological analysis beyond
// this (so "riding" -> "rid", a documented approximation — both sides of a
// comparison go through the same table).
inline std::string lemmatize_word(std::string_view word) {
    std::string w = ascii_lower(word);
    const auto n = w.size();
    auto ends = [&](std::string_view suffix) {
        return n >= suffix.size() && std::string_view(w).substr(n - suffix.size()) == suffix;
    };
    auto undouble = [](std::string s) {
        const auto m = s.size();
        if (m >= 2 && s[m - 1] == s[m - 2]) {
            const char c = s[m - 1];
            if (c != 'l' && c != 's' && !(c == 'e' || c == 'a' || c == 'i' || c == 'o' || c == 'u'))
                s.pop_back();
        }
        return s;
    };
    if (ends("ies") && n >= 5) return w.substr(0, n - 3) + "y";
    if (ends("sses")) return w.substr(0, n - 2);
    if (ends("ches") || ends("shes") || ends("xes") || ends("zes")) return w.substr(0, n - 2);
    if (ends("ss") || ends("us") || ends("is")) return w;
    if (ends("s") && n >= 4) return w.substr(0, n - 1);
    if (ends("ing") && n >= 6) return undouble(w.substr(0, n - 3));
    if (ends("ed") && n >= 5 && w[n - 3] != 'e') return undouble(w.substr(0, n - 2));
    return w;
}

// Phrases lemmatize their first word only; the rest is kept verbatim
// (already lowercased/normalized). "dogs running" -> "dog running".
inline std::string lemmatize_phrase(std::string_view phrase) {
    const std::string norm = normalize_phrase(phrase);
    const auto space = norm.find(' ');
    if (space == std::string::npos) return lemmatize_word(norm);
    return lemmatize_word(norm.substr(0, space)) + norm.substr(space);
}

// word -> set of opaque synset ids, loaded from a tab-separated file:
//   word<TAB>synset1,synset2,...
// Lookups are case-insensitive and also try the lemmatized form.
class SynonymLexicon {
public:
    SynonymLexicon() = default;

    static SynonymLexicon load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InvalidInput("cannot open lexicon file: " + path);
        SynonymLexicon lex;
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const auto t = trim(line);
            if (t.empty() || t.front() == '#') continue;
            const auto tab = line.find('\t');
            if (tab == std::string::npos)
                throw ParseError(line_no, "expected word<TAB>synset list");
            const std::string word = normalize_phrase(line.substr(0, tab));
            if (word.empty()) throw ParseError(line_no, "empty word");
            auto& bucket = lex.map_[word];
            for (const auto& raw : split(std::string_view(line).substr(tab + 1), ',')) {
                const auto id = trim(raw);
                if (!id.empty()) bucket.insert(std::string(id));
            }
            if (bucket.empty()) throw ParseError(line_no, "word has no synsets: " + word);
        }
        return lex;
    }

    void add(const std::string& word, const std::string& synset) {
        map_[normalize_phrase(word)].insert(synset);
    }

    std::set<std::string> synsets(std::string_view phrase) const {
        std::set<std::string> out;
        const std::string norm = normalize_phrase(phrase);
        if (const auto it = map_.find(norm); it != map_.end())
            out.insert(it->second.begin(), it->second.end());
        const std::string lemma = lemmatize_phrase(norm);
        if (lemma != norm)
            if (const auto it = map_.find(lemma); it != map_.end())
                out.insert(it->second.begin(), it->second.end());
        return out;
    }

    std::size_t size() const { return map_.size(); }

private:
    std::unordered_map<std::string, std::set<std::string>> map_;
};

// Two phrases agree when their lemmas are equal or they share a synset.
inline bool components_match(std::string_view a, std::string_view b,
                             const SynonymLexicon& lexicon) {
    if (lemmatize_phrase(a) == lemmatize_phrase(b)) return true;
    const auto sa = lexicon.synsets(a);
    if (sa.empty()) return false;
    const auto sb = lexicon.synsets(b);
    for (const auto& s : sa)
        if (sb.count(s)) return true;
    return false;
}

// Tuple match: same arity and every component pair matches.
inline bool synonym_match(const SemanticTuple& a, const SemanticTuple& b,
                          const SynonymLexicon& lexicon) {
    if (a.arity() != b.arity()) return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (!components_match(a.components[i], b.components[i], lexicon)) return false;
    return true;
}

}  // namespace best
