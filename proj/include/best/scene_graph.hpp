#pragma once
#include <algorithm>
#include <array>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "best/errors.hpp"
#include "best/text.hpp"

namespace best {

// Lowercase and collapse whitespace runs so graph strings compare cleanly.
inline std::string normalize_phrase(std::string_view s) {
    std::string out;
    bool pending_space = false;
    for (const char c : trim(s)) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out += ' ';
        pending_space = false;
        out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

struct AttributePair {
    std::string object;
    std::string attribute;
    auto operator<=>(const AttributePair&) const = default;
};

struct RelationTriple {
    std::string object;
    std::string relation;
    std::string subject;
    auto operator<=>(const RelationTriple&) const = default;
};

// Objects, their attributes, and object–object relations extracted from a
// description of one image.
struct SceneGraph {
    std::vector<std::string> objects;
    std::vector<AttributePair> attributes;
    std::vector<RelationTriple> relations;

    // Normalizes every string and deduplicates objects (keeping first
    // occurrence order); attribute/relation rows keep their multiplicity.
    void normalize() {
        for (auto& o : objects) o = normalize_phrase(o);
        std::vector<std::string> unique;
        for (auto& o : objects)
            if (std::find(unique.begin(), unique.end(), o) == unique.end()) unique.push_back(o);
        objects = std::move(unique);
        for (auto& a : attributes) {
            a.object = normalize_phrase(a.object);
            a.attribute = normalize_phrase(a.attribute);
        }
        for (auto& r : relations) {
            r.object = normalize_phrase(r.object);
            r.relation = normalize_phrase(r.relation);
            r.subject = normalize_phrase(r.subject);
        }
    }

    void validate() const {
        auto known = [&](const std::string& name) {
            return std::find(objects.begin(), objects.end(), name) != objects.end();
        };
        for (const auto& a : attributes) {
            if (a.object.empty() || a.attribute.empty())
                throw InvalidInput("attribute components must be non-empty");
            if (!known(a.object)) throw InvalidInput("attribute references unknown object: " + a.object);
        }
        for (const auto& r : relations) {
            if (r.object.empty() || r.relation.empty() || r.subject.empty())
                throw InvalidInput("relation components must be non-empty");
            if (!known(r.object)) throw InvalidInput("relation references unknown object: " + r.object);
            if (!known(r.subject)) throw InvalidInput("relation references unknown object: " + r.subject);
        }
        for (const auto& o : objects)
            if (o.empty()) throw InvalidInput("object names must be non-empty");
    }
};

// A unit of comparison for scoring: (object), (object, attribute) or
// (object, relation, subject), held as 1–3 normalized components.
struct SemanticTuple {
    std::vector<std::string> components;

    std::size_t arity() const { return components.size(); }
    auto operator<=>(const SemanticTuple&) const = default;
};

// Pools a graph into its deduplicated tuple set: object singletons first,
// then attribute pairs, then relation triples, preserving first-seen order.
inline std::vector<SemanticTuple> tuples(const SceneGraph& graph) {
    std::vector<SemanticTuple> out;
    std::set<std::vector<std::string>> seen;
    auto add = [&](std::vector<std::string> comps) {
        for (auto& c : comps) c = normalize_phrase(c);
        for (const auto& c : comps)
            if (c.empty()) return;
        if (seen.insert(comps).second) out.push_back({std::move(comps)});
    };
    for (const auto& o : graph.objects) add({o});
    for (const auto& a : graph.attributes) add({a.object, a.attribute});
    for (const auto& r : graph.relations) add({r.object, r.relation, r.subject});
    return out;
}

inline nlohmann::ordered_json to_json(const SceneGraph& g) {
    nlohmann::ordered_json j;
    j["objects"] = g.objects;
    auto attrs = nlohmann::ordered_json::array();
    for (const auto& a : g.attributes) attrs.push_back({a.object, a.attribute});
    j["attributes"] = std::move(attrs);
    auto rels = nlohmann::ordered_json::array();
    for (const auto& r : g.relations) rels.push_back({r.object, r.relation, r.subject});
    j["relations"] = std::move(rels);
    return j;
}

inline SceneGraph graph_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InvalidInput("scene graph JSON must be an object");
    SceneGraph g;
    if (j.contains("objects")) {
        if (!j["objects"].is_array()) throw InvalidInput("\"objects\" must be an array");
        for (const auto& o : j["objects"]) g.objects.push_back(o.get<std::string>());
    }
    if (j.contains("attributes")) {
        if (!j["attributes"].is_array()) throw InvalidInput("\"attributes\" must be an array");
        for (const auto& row : j["attributes"]) {
            if (!row.is_array() || row.size() != 2)
                throw InvalidInput("attribute rows must be [object, attribute]");
            g.attributes.push_back({row[0].get<std::string>(), row[1].get<std::string>()});
        }
    }
    if (j.contains("relations")) {
        if (!j["relations"].is_array()) throw InvalidInput("\"relations\" must be an array");
        for (const auto& row : j["relations"]) {
            if (!row.is_array() || row.size() != 3)
                throw InvalidInput("relation rows must be [object, relation, subject]");
            g.relations.push_back({row[0].get<std::string>(), row[1].get<std::string>(),
                                   row[2].get<std::string>()});
        }
    }
    g.normalize();
    g.validate();
    return g;
}

}  // namespace best
