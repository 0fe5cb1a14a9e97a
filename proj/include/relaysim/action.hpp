#pragma once

#include <array>

namespace relaysim {

enum class Move : int { Stay = 0, North = 1, South = 2, East = 3, West = 4, Up = 5, Down = 6 };

inline constexpr int kNumMoves = 7;
inline constexpr int kNumPowers = 3;
inline constexpr int kNumActions = kNumMoves * kNumPowers;  // 21

struct Action {
    Move move = Move::Stay;
    int power_index = 0;
};

// Composite index layout: 3 * move + power, in [0, 20].
inline int encode_action(const Action& a) {
    return static_cast<int>(a.move) * kNumPowers + a.power_index;
}

inline Action decode_action(int idx) {
    return {static_cast<Move>(idx / kNumPowers), idx % kNumPowers};
}

using ActionMask = std::array<bool, kNumActions>;

}  // namespace relaysim
