#include "lamplab/lattice_walk.hpp"

#include <cmath>
#include <stdexcept>

namespace lamplab {

LatticeBoxWalk::LatticeBoxWalk(int d, std::int64_t radius) : d_(d), radius_(radius) {
    if (d < 1 || d > 4) throw std::invalid_argument("lattice walk: dim must be in 1..4");
    if (radius < 1) throw std::invalid_argument("lattice walk: radius must be >= 1");
    const std::int64_t side = 2 * radius + 1;
    stride_[d - 1] = 1;
    for (int i = d - 2; i >= 0; --i) stride_[i] = stride_[i + 1] * side;
    reset();
}

void LatticeBoxWalk::reset() { pos_.fill(0); }

std::int64_t LatticeBoxWalk::displacement_linf() const {
    std::int64_t m = 0;
    for (int i = 0; i < d_; ++i) m = std::max(m, std::abs(pos_[i]));
    return m;
}

std::int64_t LatticeBoxWalk::packed_position() const {
    std::int64_t id = 0;
    for (int i = 0; i < d_; ++i) id += (pos_[i] + radius_) * stride_[i];
    return id;
}

void LatticeBoxWalk::step(SplitRng& rng) {
    // neighbor slots in ascending id order: -e_0, -e_1, ..., +e_{d-1}, +e_0
    std::array<std::int8_t, 8> axis;
    std::array<std::int8_t, 8> sign;
    int deg = 0;
    for (int i = 0; i < d_; ++i)
        if (pos_[i] > -radius_) {
            axis[deg] = static_cast<std::int8_t>(i);
            sign[deg++] = -1;
        }
    for (int i = d_ - 1; i >= 0; --i)
        if (pos_[i] < radius_) {
            axis[deg] = static_cast<std::int8_t>(i);
            sign[deg++] = 1;
        }
    const int slot = static_cast<int>(rng.next_unit() * deg);
    pos_[axis[slot]] += sign[slot];
}

} // namespace lamplab
