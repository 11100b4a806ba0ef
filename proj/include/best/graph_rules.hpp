#pragma once
#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "best/conllu.hpp"
#include "best/scene_graph.hpp"
#include "best/text.hpp"

namespace best {

namespace detail {

// "nsubj:pass" -> "nsubj", "obl:agent" -> "obl".
inline std::string base_label(const std::string& label) {
    const auto colon = label.find(':');
    return colon == std::string::npos ? label : label.substr(0, colon);
}

inline bool is_noun(const DepToken& t) { return t.upos == "NOUN" || t.upos == "PROPN"; }

}  // namespace detail

// Deterministic reduction from one dependency tree to a scene graph:
//   * noun tokens become objects (multiword-expression parts and compound
//     modifiers fold into their head's name instead);
//   * adjectival modifiers, copular adjectives, and subject-only verbs
//     (including participles modifying a noun) become attributes;
//   * subject-verb-object chains, noun-preposition-noun attachments, and
//     prepositional complements of verbs/copulas become relations, with
//     multiword prepositions ("in front of") kept as one phrase.
// Unmatched structures contribute nothing; every tree yields a graph.
inline SceneGraph graph_from_dependencies(const DependencyTree& tree) {
    const auto n = tree.tokens.size();
    auto base = [&](std::size_t i) { return detail::base_label(tree.labels[i]); };

    // Object tokens: nouns that are not themselves folded into another name.
    std::vector<bool> is_object(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (!detail::is_noun(tree.tokens[i])) continue;
        const auto b = base(i);
        if (b == "fixed" || b == "compound" || b == "flat" || b == "goeswith") continue;
        is_object[i] = true;
    }

    // Object name: compound modifiers plus the head, in token order.
    auto object_name = [&](std::size_t i) {
        std::vector<std::size_t> parts;
        for (std::size_t j = 0; j < n; ++j)
            if (tree.heads[j] == i && base(j) == "compound") parts.push_back(j);
        parts.push_back(i);
        std::sort(parts.begin(), parts.end());
        std::string name;
        for (const auto p : parts) {
            if (!name.empty()) name += ' ';
            name += tree.tokens[p].form;
        }
        return name;
    };

    auto find_child = [&](std::size_t head, std::string_view label) -> std::optional<std::size_t> {
        for (std::size_t j = 0; j < n; ++j)
            if (tree.heads[j] == head && base(j) == label) return j;
        return std::nullopt;
    };

    // Preposition phrase for a token: its "case" child plus that child's
    // "fixed" children, joined in token order ("in" + "front" + "of").
    auto prep_phrase = [&](std::size_t i) -> std::optional<std::string> {
        const auto case_child = find_child(i, "case");
        if (!case_child) return std::nullopt;
        std::vector<std::size_t> parts{*case_child};
        for (std::size_t j = 0; j < n; ++j)
            if (tree.heads[j] == *case_child && base(j) == "fixed") parts.push_back(j);
        std::sort(parts.begin(), parts.end());
        std::string phrase;
        for (const auto p : parts) {
            if (!phrase.empty()) phrase += ' ';
            phrase += tree.tokens[p].form;
        }
        return phrase;
    };

    SceneGraph graph;
    auto add_object = [&](std::size_t i) {
        const auto name = normalize_phrase(object_name(i));
        if (std::find(graph.objects.begin(), graph.objects.end(), name) == graph.objects.end())
            graph.objects.push_back(name);
        return name;
    };
    auto add_attribute = [&](std::size_t obj, const std::string& value) {
        const AttributePair pair{add_object(obj), normalize_phrase(value)};
        if (std::find(graph.attributes.begin(), graph.attributes.end(), pair) ==
            graph.attributes.end())
            graph.attributes.push_back(pair);
    };
    auto add_relation = [&](std::size_t obj, const std::string& rel, std::size_t subj) {
        const RelationTriple triple{add_object(obj), normalize_phrase(rel), add_object(subj)};
        if (std::find(graph.relations.begin(), graph.relations.end(), triple) ==
            graph.relations.end())
            graph.relations.push_back(triple);
    };

    for (std::size_t i = 0; i < n; ++i)
        if (is_object[i]) add_object(i);

    for (std::size_t i = 0; i < n; ++i) {
        const auto b = base(i);
        const auto& tok = tree.tokens[i];

        // Adjectival (or participial) modifier: "a blue snowboard".
        if (b == "amod" && tree.heads[i] != DependencyTree::npos &&
            is_object[tree.heads[i]]) {
            add_attribute(tree.heads[i], tok.form);
            continue;
        }

        // Copular adjective: "the snowboard is blue".
        if (tok.upos == "ADJ" && find_child(i, "cop")) {
            if (const auto subj = find_child(i, "nsubj"); subj && is_object[*subj])
                add_attribute(*subj, tok.form);
            continue;
        }

        // Copular prepositional predicate: "the cat is on the mat"
        // (the predicate noun holds the cop, nsubj, and case children).
        if (detail::is_noun(tok) && is_object[i] && find_child(i, "cop")) {
            const auto subj = find_child(i, "nsubj");
            const auto prep = prep_phrase(i);
            if (subj && is_object[*subj] && prep) add_relation(*subj, *prep, i);
            continue;
        }

        // Noun-to-noun prepositional attachment: "the cup on the table".
        if (detail::is_noun(tok) && is_object[i] && b == "nmod" &&
            tree.heads[i] != DependencyTree::npos && is_object[tree.heads[i]]) {
            if (const auto prep = prep_phrase(i)) add_relation(tree.heads[i], *prep, i);
            continue;
        }

        if (tok.upos != "VERB") continue;

        // The noun a verb predicates over: its subject, or the noun it
        // modifies as a participial clause ("a man sitting ...").
        std::optional<std::size_t> anchor;
        if (const auto subj = find_child(i, "nsubj"); subj && is_object[*subj]) anchor = *subj;
        if (!anchor && b == "acl" && tree.heads[i] != DependencyTree::npos &&
            is_object[tree.heads[i]])
            anchor = tree.heads[i];
        if (!anchor) continue;

        // Subject-verb-object: "a man rides a horse".
        const auto obj = find_child(i, "obj");
        if (obj && is_object[*obj]) {
            add_relation(*anchor, tok.form, *obj);
        } else if (!obj) {
            // Verb with no object reads as a state of its anchor noun:
            // "a man is sitting" / "a man sitting ...".
            add_attribute(*anchor, tok.form);
        }

        // Prepositional complements relate the anchor to the oblique noun:
        // "sitting in front of a snowboard" -> (man, in front of, snowboard).
        for (std::size_t ob = 0; ob < n; ++ob) {
            if (tree.heads[ob] != i || base(ob) != "obl" || !is_object[ob]) continue;
            if (const auto prep = prep_phrase(ob)) add_relation(*anchor, *prep, ob);
        }
    }
    return graph;
}

// Union of per-sentence graphs, deduplicated, for scoring whole paragraphs.
inline SceneGraph graph_from_dependencies(const std::vector<DependencyTree>& trees) {
    SceneGraph merged;
    for (const auto& tree : trees) {
        const auto g = graph_from_dependencies(tree);
        for (const auto& o : g.objects)
            if (std::find(merged.objects.begin(), merged.objects.end(), o) ==
                merged.objects.end())
                merged.objects.push_back(o);
        for (const auto& a : g.attributes)
            if (std::find(merged.attributes.begin(), merged.attributes.end(), a) ==
                merged.attributes.end())
                merged.attributes.push_back(a);
        for (const auto& r : g.relations)
            if (std::find(merged.relations.begin(), merged.relations.end(), r) ==
                merged.relations.end())
                merged.relations.push_back(r);
    }
    return merged;
}

}  // namespace best
