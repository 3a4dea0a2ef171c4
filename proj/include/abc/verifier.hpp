#pragma once
// Exhaustive desk-scale verification: exact correct-probability of tiny block
// codes, decoder optimization, and the two per-code converse bounds.

#include <cstdint>
#include <string>
#include <vector>

#include "abc/channel.hpp"
#include "abc/exponent.hpp"

namespace abc {

inline constexpr std::size_t kEnumBudget = std::size_t{1} << 22;  // weighted terms

struct BlockCode {
    int n = 1;
    int K = 1, L = 1;
    std::size_t nx = 2;            // channel input alphabet
    StochasticMatrix encoder;      // (K*L) rows, nx^n columns; deterministic = point rows
    std::vector<std::size_t> dec1; // ny^n entries, each k*L + l
    std::vector<std::size_t> dec2; // nz^n entries, each l

    double r1() const { return std::log(static_cast<double>(K)) / n; }
    double r2() const { return std::log(static_cast<double>(L)) / n; }
    std::size_t row(int k, int l) const { return static_cast<std::size_t>(k) * L + l; }
};

struct BoundReport {
    std::string label;
    double p_c = 0.0;
    double bound = 0.0;
    double slack = 0.0;  // bound - p_c
    bool pass = false;   // slack >= -1e-12
};

std::size_t pow_sz(std::size_t base, int exp);

// codewords: one length-n symbol vector per (k,l), row-major in (k,l).
// Decoders start as all-zeros; run optimize_decoders before measuring.
BlockCode make_deterministic_code(int n, int K, int L,
                                  const std::vector<std::vector<std::size_t>>& codewords,
                                  const ChannelPair& ch);

// { "n": int, "K": int, "L": int, "encoder": [[symbols...] per (k,l)],
//   optional "dec1": [[k,l] per y^n], "dec2": [l per z^n] }
BlockCode parse_code_spec(const std::string& text, const ChannelPair& ch);

// Product-channel matrix W^n: nx^n rows, nout^n columns.
std::vector<double> product_channel(const StochasticMatrix& w, int n);

double exact_correct_probability(const BlockCode& code, const ChannelPair& ch);

// { P_e, P_e1, P_e2 } from the same enumeration; P_e = 1 - P_c exactly.
std::array<double, 3> error_probabilities(const BlockCode& code, const ChannelPair& ch);

// Alternating MAP-style updates; exact P_c never decreases per half-round.
BlockCode optimize_decoders(const BlockCode& code, const ChannelPair& ch, int rounds = 8);

BoundReport check_theorem3_bound(const BlockCode& code, const ChannelPair& ch,
                                 const ExponentParams& ep, const OmegaResult& omega);

// The five test distributions of the information-spectrum bound.
struct Lemma1Q {
    std::vector<double> qi;    // Y^n given (x^n, z^n, l):   [((xn*NZ+zn)*L+l)*NY+yn]
    std::vector<double> qii;   // Z^n given (x^n, y^n, l):   [((xn*NY+yn)*L+l)*NZ+zn]
    std::vector<double> qiii;  // Y^n given l:               [l*NY+yn]
    std::vector<double> qiv;   // Z^n:                       [zn]
    std::vector<double> qv;    // Y^n:                       [yn]
};

Lemma1Q lemma1_induced_q(const BlockCode& code, const ChannelPair& ch);
Lemma1Q lemma1_random_q(const BlockCode& code, const ChannelPair& ch, std::uint64_t seed);

BoundReport check_lemma1_bound(const BlockCode& code, const ChannelPair& ch, const Lemma1Q& qs,
                               double eta);

}  // namespace abc
