#pragma once

// Solves the nested problems n = 1..N and collects the evidence that the
// surfaces settle down: probe-window differences, boundary extents, the
// ideal trace around the spiral and clearance from barrier disks.

#include "cmclab/barrier.hpp"
#include "cmclab/solver.hpp"

#include <vector>

namespace cmclab {

struct SequenceOptions {
    int n_max = 4;
    int n_lambda = 96;
    int n_z = 192;
    std::vector<double> radii; // R_n for n = 1..n_max; default_radius(n) when empty
    SolveOptions solve;
    int barriers = 8;
    BarrierOptions barrier{3, 1024};
    double probe_fraction = 0.25; // lambda half-width over the lambda extent of E_1
    double probe_z = 1.0;
    int probe_samples = 11;
};

struct SequenceMember {
    int n = 0;
    double R = 0.0;
    BoundaryCurve gamma;
    double trace_distance = 0.0;
    GraphSurface surface;
    SolveReport report;
};

struct ProbeWindow {
    double lambda_lo = 0.0, lambda_hi = 0.0;
    double z_lo = 0.0, z_hi = 0.0;
};

struct SequenceReport {
    ProbeWindow probe;
    std::vector<double> probe_differences; // sup |u_{n+1} - u_n|, n = 1..N-1
    bool differences_decrease = false;
    bool extents_monotone = false; // lambda_n^- decreasing, lambda_n^+ increasing
    bool trace_shrinks = false;
    double barrier_clearance = 0.0; // min over members, nodes and disks
    int valid_members = 0;          // leading converged members; the tail after them is invalid
};

struct SequenceResult {
    std::vector<SequenceMember> members;
    std::vector<BarrierDisk> barriers;
    SequenceReport report;
};

// Omega_n is centred on theta = 0 for every n, so the deck normalization
// between consecutive members is the zero shift.
double deck_offset(int n);

double barrier_clearance(const GraphSurface& s, const std::vector<BarrierDisk>& disks);

SequenceResult converge_sequence(const StripField& field, const SpiralProfile& spiral, const SequenceOptions& opts = {});

} // namespace cmclab
