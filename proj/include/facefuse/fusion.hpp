#pragma once

#include <string>

#include "facefuse/matrix.hpp"
#include "facefuse/wavelet.hpp"

namespace facefuse {

enum class FusionVariant { average, max_abs, weighted };

// Per-coefficient combination rule. weighted(w) computes w*a + (1-w)*b;
// max_abs keeps the coefficient of larger magnitude, ties taken from the
// first (visual) argument.
struct FusionRule {
    FusionVariant variant = FusionVariant::average;
    double weight = 0.5;  // used by weighted only

    static FusionRule average() { return {FusionVariant::average, 0.5}; }
    static FusionRule max_abs() { return {FusionVariant::max_abs, 0.5}; }
    static FusionRule weighted(double w);

    double combine(double a, double b) const;
};

/// Parses "average", "maxabs", or "weighted:<w>" (CLI --rule syntax).
FusionRule fusion_rule_from_string(const std::string& text);
std::string to_string(const FusionRule& rule);

// Rules applied per subband kind; default uniform. Lets callers express
// e.g. averaged approximation with max-abs details.
struct SubbandRules {
    FusionRule approximation;
    FusionRule horizontal;
    FusionRule vertical;
    FusionRule diagonal;

    static SubbandRules uniform(FusionRule rule) { return {rule, rule, rule, rule}; }
};

/// Coefficientwise fusion of two structurally identical pyramids. Throws
/// DataError naming the first differing field on structural mismatch.
DecompositionPyramid fuse_pyramids(const DecompositionPyramid& p,
                                   const DecompositionPyramid& q, const SubbandRules& rules);
DecompositionPyramid fuse_pyramids(const DecompositionPyramid& p,
                                   const DecompositionPyramid& q, FusionRule rule);

/// Whole-image fusion: decompose both inputs, fuse coefficientwise, zero
/// the fused approximation when zero_ca is set, reconstruct.
GrayImage fuse_images(const GrayImage& visual, const GrayImage& thermal,
                      const FilterBank& bank, BoundaryMode mode, int levels, FusionRule rule,
                      bool zero_ca);

}  // namespace facefuse
