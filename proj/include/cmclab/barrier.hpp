#pragma once

// Maximal ideal circles tangent to the limit spiral at a point, and the
// equidistant H-surfaces they bound.

#include "cmclab/domain.hpp"

#include <utility>
#include <vector>

namespace cmclab {

struct BarrierDisk {
    double theta = 0.0; // spiral parameter of the tangency point
    bool upper = true;
    int which = 1;      // side of the spiral
    Vec3 p;             // tangency point on the sphere at infinity
    IdealCircle circle;
    EquidistantSurface surface;

    // Hyperbolic distance from q to the barrier surface, positive on the
    // side away from the disk.
    double clearance(const BallPoint& q) const { return -surface.signed_excess(q); }
};

struct BarrierOptions {
    int turns = 3;           // neighbouring spiral turns examined on each side
    int samples_per_turn = 4096;
};

// Gap between the disk and the spiral trace, minimum over the examined
// turns and both limit circles; zero means tangent.
double spiral_gap(const SlabChart& chart, const SpiralProfile& spiral, double theta_p, bool upper,
                  const IdealCircle& circle, const BarrierOptions& opts = {});

std::pair<BarrierDisk, BarrierDisk> barrier_disks(const SlabChart& chart, const SpiralProfile& spiral, double theta_p,
                                                  bool upper, const BarrierOptions& opts = {});

std::vector<BarrierDisk> sample_barriers(const SlabChart& chart, const SpiralProfile& spiral, int count,
                                         const BarrierOptions& opts = {});

} // namespace cmclab
