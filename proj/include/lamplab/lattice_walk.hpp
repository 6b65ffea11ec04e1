#ifndef LAMPLAB_LATTICE_WALK_HPP
#define LAMPLAB_LATTICE_WALK_HPP

#include <array>
#include <cstdint>

#include "lamplab/rng.hpp"

namespace lamplab {

// Walks on the box {-radius..radius}^d without materializing the graph.
// Steps reproduce walk_step on make_lattice exactly: neighbors are taken
// in ascending vertex-id order (id is row-major in the first coordinate),
// and the uniform draw picks slot floor(u * degree), which matches the
// cumulative-weight inverse for equal weights.
class LatticeBoxWalk {
public:
    LatticeBoxWalk(int d, std::int64_t radius);

    int dim() const { return d_; }
    std::int64_t radius() const { return radius_; }

    // coordinates of the current position (origin start)
    const std::array<std::int64_t, 4>& position() const { return pos_; }
    std::int64_t displacement_linf() const;
    std::int64_t packed_position() const; // row-major index into the box

    void reset();
    void step(SplitRng& rng);

private:
    int d_;
    std::int64_t radius_;
    std::array<std::int64_t, 4> pos_{};
    std::array<std::int64_t, 4> stride_{};
};

} // namespace lamplab

#endif
