#pragma once
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "best/errors.hpp"
#include "best/text.hpp"

namespace best {

struct DepToken {
    std::string form;
    std::string lemma;
    std::string upos;
};

struct DepEdge {
    std::size_t head = 0;  // token index
    std::size_t dep = 0;   // token index
    std::string label;
};

// One parsed sentence: tokens plus a single-rooted, acyclic head assignment.
class DependencyTree {
public:
    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    std::vector<DepToken> tokens;
    std::vector<std::size_t> heads;   // npos for the root token
    std::vector<std::string> labels;  // deprel per token ("root" at the root)
    std::size_t root = npos;

    std::vector<DepEdge> edges() const {
        std::vector<DepEdge> out;
        for (std::size_t i = 0; i < tokens.size(); ++i)
            if (heads[i] != npos) out.push_back({heads[i], i, labels[i]});
        return out;
    }

    std::vector<std::size_t> children(std::size_t head) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < tokens.size(); ++i)
            if (heads[i] == head) out.push_back(i);
        return out;
    }

    std::vector<std::size_t> children(std::size_t head, std::string_view label) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < tokens.size(); ++i)
            if (heads[i] == head && labels[i] == label) out.push_back(i);
        return out;
    }

    std::optional<std::size_t> child(std::size_t head, std::string_view label) const {
        const auto all = children(head, label);
        if (all.empty()) return std::nullopt;
        return all.front();
    }
};

// Parses 10-column CoNLL-U text: one token row per line, sentences separated
// by blank lines, "#" comment lines skipped. Multiword-token ranges ("3-4")
// and empty nodes ("5.1") are skipped; the basic tree is what matters here.
inline std::vector<DependencyTree> ingest_dependencies(const std::string& conllu_text) {
    std::vector<DependencyTree> trees;

    struct Row {
        std::size_t id;
        DepToken token;
        std::size_t head;  // 1-based; 0 = root
        std::string label;
        std::size_t line_no;
    };
    std::vector<Row> rows;

    auto finish_sentence = [&] {
        if (rows.empty()) return;
        DependencyTree tree;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].id != i + 1)
                throw ParseError(rows[i].line_no, "token ids must run 1..n within a sentence");
        }
        for (const auto& row : rows) {
            if (row.head > rows.size())
                throw ParseError(row.line_no, "head index out of range");
            tree.tokens.push_back(row.token);
            tree.labels.push_back(row.label);
            if (row.head == 0) {
                if (tree.root != DependencyTree::npos)
                    throw ParseError(row.line_no, "sentence has multiple roots");
                tree.root = tree.tokens.size() - 1;
                tree.heads.push_back(DependencyTree::npos);
            } else {
                tree.heads.push_back(row.head - 1);
            }
        }
        if (tree.root == DependencyTree::npos)
            throw ParseError(rows.back().line_no, "sentence has no root");
        // A unique root plus one head per token still allows cycles off to
        // the side; walking up must reach the root within n steps.
        for (std::size_t i = 0; i < tree.tokens.size(); ++i) {
            std::size_t cur = i, steps = 0;
            while (cur != tree.root) {
                cur = tree.heads[cur];
                if (++steps > tree.tokens.size())
                    throw ParseError(rows[i].line_no, "cyclic head chain");
            }
        }
        trees.push_back(std::move(tree));
        rows.clear();
    };

    std::size_t line_no = 0;
    for (const auto& raw_line : split(conllu_text, '\n')) {
        ++line_no;
        const auto line = trim(raw_line);
        if (line.empty()) {
            finish_sentence();
            continue;
        }
        if (line.front() == '#') continue;
        const auto cols = split(raw_line, '\t');
        if (cols.size() != 10)
            throw ParseError(line_no, "expected 10 tab-separated columns, got " +
                                          std::to_string(cols.size()));
        const std::string& id_col = cols[0];
        if (id_col.find('-') != std::string::npos || id_col.find('.') != std::string::npos)
            continue;  // multiword range or empty node
        Row row;
        row.line_no = line_no;
        try {
            row.id = std::stoul(id_col);
            row.head = std::stoul(cols[6]);
        } catch (const std::exception&) {
            throw ParseError(line_no, "id and head must be non-negative integers");
        }
        row.token.form = cols[1];
        row.token.lemma = cols[2] == "_" ? ascii_lower(cols[1]) : cols[2];
        row.token.upos = cols[3];
        row.label = cols[7];
        rows.push_back(std::move(row));
    }
    finish_sentence();
    return trees;
}

}  // namespace best
