#pragma once

#include <cstdint>
#include <string>

namespace ntos {

// 128-bit accumulators. Counts and integer sums over full rectangles exceed
// 64 bits at the upper desk scale, so every exact accumulator uses these.
using u128 = unsigned __int128;
using i128 = __int128;

inline std::string to_string(u128 v) {
    if (v == 0) return "0";
    std::string s;
    while (v > 0) {
        s.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
        v /= 10;
    }
    return std::string(s.rbegin(), s.rend());
}

inline std::string to_string(i128 v) {
    if (v < 0) return "-" + to_string(static_cast<u128>(-v));
    return to_string(static_cast<u128>(v));
}

}  // namespace ntos
