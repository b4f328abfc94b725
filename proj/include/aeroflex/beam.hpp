#pragma once

#include <functional>
#include <vector>

#include "aeroflex/config.hpp"
#include "aeroflex/types.hpp"

namespace aeroflex {

// Cantilever wing beam, clamped at node 0. Four degrees of freedom per
// node: plunge w (down positive), bending rotation phi (tip-up positive,
// phi = -dw/dx), twist theta (nose-up positive) and flap deflection beta
// (trailing-edge-down positive). Bending uses cubic Hermite shape
// functions, twist is linear, flaps are hinge-sprung rigid bodies carried
// by their node.
struct BeamModel {
    int n_el{0};
    VecX stations;           // node x positions, root first [m]
    MatX M, C, K;            // full system, 4*(n_el+1) square

    // clamped partition: node 0 (index 0) vs the free nodes
    MatX M00, M01, M11;      // 4x4, 4x4n, 4nx4n
    MatX C00, C01, C11;
    MatX K00, K01, K11;

    // flap properties indexed by node (entry 0 unused)
    std::vector<FlapSpec> flap_at_node;

    int n_free_dof() const { return 4 * n_el; }
    // tributary interval of a node (element midpoints either side)
    std::pair<double, double> tributary(int node) const;
};

BeamModel build_beam(const AircraftConfig& cfg);

// Lumped nodal loads from distributed span loading: vertical force density
// f_z (down positive), bending-axis moment density m_x and twist moment
// density m_y, all per unit span. Each free node integrates over its
// tributary interval:
//   f_w = int f_z,  f_phi = int ((x_i - x) f_z - m_x),
//   f_theta = int m_y,  f_beta = 0.
// Returns the 4*n_el vector over the free nodes; the root interval reacts
// directly into the clamp and is not returned.
VecX integrate_nodal_loads(const BeamModel& beam,
                           const std::function<double(double)>& f_z,
                           const std::function<double(double)>& m_x,
                           const std::function<double(double)>& m_y);

// Undamped vibration modes of the clamped beam: generalized eigenproblem
// K11 v = w^2 M11 v. Returns angular frequencies (ascending) and the
// corresponding mode shapes as columns.
std::pair<VecX, MatX> beam_modes(const BeamModel& beam);

} // namespace aeroflex
