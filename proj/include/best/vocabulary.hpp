#pragma once
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "best/embedding.hpp"
#include "best/errors.hpp"
#include "best/gateway.hpp"
#include "best/text.hpp"

namespace best {

// An ordered tag or attribute set with one unit embedding per entry.
struct Vocabulary {
    std::vector<std::string> entries;
    std::vector<UnitEmbedding> embeddings;

    std::size_t size() const { return entries.size(); }

    void validate() const {
        if (entries.empty()) throw InvalidInput("vocabulary has no entries");
        if (embeddings.size() != entries.size())
            throw InvalidInput("vocabulary embeddings do not match entries");
        std::unordered_set<std::string> seen;
        for (const auto& e : entries)
            if (!seen.insert(ascii_lower(e)).second)
                throw InvalidInput("vocabulary entry duplicated after case-folding: " + e);
    }
};

// Reads one entry per line; "#" lines are comments; surrounding whitespace is
// trimmed; entries that collide after case-folding keep their first spelling.
inline std::vector<std::string> load_vocabulary_entries(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open vocabulary file: " + path);
    std::vector<std::string> entries;
    std::unordered_set<std::string> seen;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        std::string entry(t);
        if (seen.insert(ascii_lower(entry)).second) entries.push_back(std::move(entry));
    }
    if (entries.empty()) throw InvalidInput("vocabulary file has no entries: " + path);
    return entries;
}

// On-disk store of (entry, embedding) pairs so vocabularies are embedded once.
// Format: first line "dim <d>", then one "entry<TAB>v1 v2 ..." line per entry.
class EmbeddingCache {
public:
    explicit EmbeddingCache(std::size_t dim) : dim_(dim) {
        if (dim == 0) throw InvalidInput("embedding cache dimension must be positive");
    }

    static EmbeddingCache load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw InvalidInput("cannot open embedding cache: " + path);
        std::string line;
        std::size_t line_no = 0;
        if (!std::getline(in, line)) throw ParseError(1, "embedding cache is empty");
        ++line_no;
        std::size_t dim = 0;
        {
            std::istringstream header(line);
            std::string word;
            if (!(header >> word >> dim) || word != "dim" || dim == 0)
                throw ParseError(line_no, "expected header \"dim <d>\"");
        }
        EmbeddingCache cache(dim);
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            const auto tab = line.find('\t');
            if (tab == std::string::npos)
                throw ParseError(line_no, "expected entry<TAB>values");
            std::string entry = line.substr(0, tab);
            std::vector<double> values;
            values.reserve(dim);
            std::istringstream rest(line.substr(tab + 1));
            double v;
            while (rest >> v) values.push_back(v);
            if (values.size() != dim)
                throw ParseError(line_no, "expected " + std::to_string(dim) + " values, got " +
                                              std::to_string(values.size()));
            cache.put(entry, UnitEmbedding::normalized(values));
        }
        return cache;
    }

    void save(const std::string& path) const {
        std::ofstream out(path);
        if (!out) throw InvalidInput("cannot write embedding cache: " + path);
        out << "dim " << dim_ << "\n";
        char buf[32];
        for (const auto& entry : order_) {
            out << entry << '\t';
            const auto& values = map_.at(entry).values();
            for (std::size_t i = 0; i < values.size(); ++i) {
                std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
                if (i) out << ' ';
                out << buf;
            }
            out << '\n';
        }
    }

    std::optional<UnitEmbedding> find(const std::string& entry) const {
        const auto it = map_.find(entry);
        if (it == map_.end()) return std::nullopt;
        return it->second;
    }

    void put(const std::string& entry, const UnitEmbedding& emb) {
        if (emb.dim() != dim_)
            throw InvalidInput("embedding dimension does not match cache header");
        if (map_.emplace(entry, emb).second) order_.push_back(entry);
        else map_.at(entry) = emb;
    }

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return order_.size(); }

private:
    std::size_t dim_;
    std::vector<std::string> order_;
    std::unordered_map<std::string, UnitEmbedding> map_;
};

// Builds a vocabulary from entries, reusing cached embeddings where present
// and embedding the rest in one batch. The cache picks up anything new.
inline Vocabulary build_vocabulary(const std::vector<std::string>& entries,
                                   ModelGateway& gateway, EmbeddingCache* cache = nullptr) {
    Vocabulary vocab;
    vocab.entries = entries;
    vocab.embeddings.resize(entries.size());
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (cache) {
            if (auto hit = cache->find(entries[i]); hit && hit->dim() == gateway.dim()) {
                vocab.embeddings[i] = *hit;
                continue;
            }
        }
        missing.push_back(i);
    }
    if (!missing.empty()) {
        std::vector<std::string> texts;
        texts.reserve(missing.size());
        for (auto i : missing) texts.push_back(entries[i]);
        auto fresh = gateway.embed_texts(texts);
        // A cache built for a different embedding width is left alone.
        const bool writable = cache && cache->dim() == gateway.dim();
        for (std::size_t k = 0; k < missing.size(); ++k) {
            vocab.embeddings[missing[k]] = fresh[k];
            if (writable) cache->put(entries[missing[k]], fresh[k]);
        }
    }
    vocab.validate();
    return vocab;
}

inline Vocabulary load_vocabulary(const std::string& path, ModelGateway& gateway,
                                  EmbeddingCache* cache = nullptr) {
    return build_vocabulary(load_vocabulary_entries(path), gateway, cache);
}

}  // namespace best
