#pragma once

namespace msym {

// Brute-force coset sums run over {identity} U {c > 0}. Closed forms count each coset as +-(c, d);
// multiply brute-force sums by this factor before comparing.
inline constexpr int kCosetFactor = 2;

// largest c for which modular symbols are tabulated by default
inline constexpr long kDefaultCMax = 10000;

}  // namespace msym
