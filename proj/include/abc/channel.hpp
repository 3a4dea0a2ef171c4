#pragma once
// Broadcast channel pair (W1, W2), auxiliary input laws, and construction of
// the structured joints p_{UXYZ} = p_U p_{X|U} W1 W2.

#include <string>

#include "abc/prob.hpp"

namespace abc {

struct ChannelPair {
    StochasticMatrix w1;  // |X| -> |Y|
    StochasticMatrix w2;  // |X| -> |Z|

    ChannelPair() = default;
    ChannelPair(StochasticMatrix a, StochasticMatrix b);

    std::size_t nx() const { return w1.in_size; }
    std::size_t ny() const { return w1.out_size; }
    std::size_t nz() const { return w2.out_size; }

    // Cardinality defaults for the auxiliary alphabet. The looser bound
    // min{|X|, |Y|+|Z|}+1 is exposed for sensitivity checks only; all
    // optimizations use the tighter ones.
    std::size_t aux_size_region() const;    // min{|X|, |Y|+|Z|-1}
    std::size_t aux_size_omega() const;     // |Y|+|Z|-1
    std::size_t aux_size_loose() const;     // min{|X|, |Y|+|Z|}+1
};

struct AuxInputLaw {
    ProbDist p_u;             // over U
    StochasticMatrix p_xgu;   // |U| -> |X|

    std::size_t nu() const { return p_u.size(); }
};

// Parses the channel-spec document:
//   { "X": int, "Y": int, "Z": int, "W1": [[...]], "W2": [[...]] }
// W1 is X rows x Y columns, W2 is X rows x Z columns, row-major reals.
// Throws ValidationError with a row/column location on malformed input.
ChannelPair parse_channel_spec(const std::string& text);

JointDistUXYZ joint_from_aux(const AuxInputLaw& aux, const ChannelPair& ch);

}  // namespace abc
