#pragma once
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "best/errors.hpp"

namespace best {

// Unit-norm embedding vector. All embeddings in the system are normalized
// at construction so that inner products live on the cosine scale and the
// beta/gamma thresholds are meaningful.
class UnitEmbedding {
public:
    UnitEmbedding() = default;

    // Normalizes `values` to unit Euclidean norm.
    static UnitEmbedding normalized(std::vector<double> values) {
        if (values.empty()) throw InvalidInput("embedding: empty vector");
        double sq = 0.0;
        for (double v : values) sq += v * v;
        const double norm = std::sqrt(sq);
        if (!(norm > 1e-12)) throw InvalidInput("embedding: zero or non-finite norm");
        for (double& v : values) v /= norm;
        return UnitEmbedding(std::move(values));
    }

    // Accepts a vector that is already unit norm within `tol`.
    static UnitEmbedding from_unit(std::vector<double> values, double tol = 1e-6) {
        if (values.empty()) throw InvalidInput("embedding: empty vector");
        double sq = 0.0;
        for (double v : values) sq += v * v;
        if (std::abs(std::sqrt(sq) - 1.0) > tol)
            throw InvalidInput("embedding: vector is not unit norm");
        return UnitEmbedding(std::move(values));
    }

    const std::vector<double>& values() const { return values_; }
    std::size_t dim() const { return values_.size(); }
    bool empty() const { return values_.empty(); }

    double norm() const {
        double sq = 0.0;
        for (double v : values_) sq += v * v;
        return std::sqrt(sq);
    }

private:
    explicit UnitEmbedding(std::vector<double> values) : values_(std::move(values)) {}

    std::vector<double> values_;
};

// Inner product of two unit embeddings; the similarity measure everywhere.
inline double similarity(const UnitEmbedding& a, const UnitEmbedding& b) {
    if (a.dim() == 0 || b.dim() == 0) throw InvalidInput("similarity: empty embedding");
    if (a.dim() != b.dim())
        throw InvalidInput("similarity: dimension mismatch (" + std::to_string(a.dim()) +
                           " vs " + std::to_string(b.dim()) + ")");
    double dot = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) dot += a.values()[i] * b.values()[i];
    return dot;
}

}  // namespace best
