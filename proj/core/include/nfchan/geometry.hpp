// SPDX-License-Identifier: Apache-2.0
//
// nfchan - near-field MIMO channel modelling with rough-surface reflections
// Copyright (C) 2026 The nfchan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef NFCHAN_GEOMETRY_HPP
#define NFCHAN_GEOMETRY_HPP

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <utility>

namespace nfchan
{
    using Vec3 = Eigen::Vector3d; // Point or displacement in [m]

    // Oriented plane with an orthonormal in-plane basis.
    // Construct through PlanePose::make(), which orthonormalizes and validates the axes.
    class PlanePose
    {
    public:
        // "normal" and "axis_u" need not be unit length; "axis_u" must not be parallel to "normal".
        // The second in-plane axis is normal x axis_u.
        static PlanePose make(const Vec3 &origin, const Vec3 &normal, const Vec3 &axis_u);

        const Vec3 &origin() const { return origin_; }
        const Vec3 &normal() const { return normal_; }
        const Vec3 &axis_u() const { return axis_u_; }
        const Vec3 &axis_v() const { return axis_v_; }

        double signed_distance(const Vec3 &p) const { return normal_.dot(p - origin_); }

        // Point at in-plane coordinates (u, v) displaced by "h" along the normal
        Vec3 point(double u, double v, double h = 0.0) const { return origin_ + u * axis_u_ + v * axis_v_ + h * normal_; }

        // In-plane coordinates of the orthogonal projection of p
        std::pair<double, double> in_plane(const Vec3 &p) const;

    private:
        PlanePose() = default;
        Vec3 origin_ = Vec3::Zero();
        Vec3 normal_ = Vec3::UnitZ();
        Vec3 axis_u_ = Vec3::UnitX();
        Vec3 axis_v_ = Vec3::UnitY();
    };

    // Local frame whose z axis passes through an antenna pair
    struct LocalFrame
    {
        Vec3 origin = Vec3::Zero();
        Vec3 z_axis = Vec3::UnitZ(); // unit length

        static LocalFrame make(const Vec3 &origin, const Vec3 &z_direction);

        // Frame of the pair (a, b): origin at the midpoint, z axis from a towards b
        static LocalFrame of_pair(const Vec3 &a, const Vec3 &b);
    };

    // Reflection of p across the plane
    Vec3 mirror_image(const Vec3 &p, const PlanePose &plane);

    // Elevation of u above the plane orthogonal to frame.z_axis, in [-pi/2, pi/2]
    // Throws std::invalid_argument("coincident point") if u == frame.origin
    double elevation_in_frame(const Vec3 &u, const LocalFrame &frame);

    // |cos| of the angles between the plane normal and (u - plane origin) for Tx and Rx
    // Throws std::invalid_argument("grazing geometry") if a point lies on the plane
    std::pair<double, double> incidence_cosines(const PlanePose &plane, const Vec3 &u_tx, const Vec3 &u_rx);

    // Intersection of the straight line mirror(u_tx) -> u_rx with the plane.
    // Throws std::invalid_argument("no reflection path") if the points are on opposite sides or on the plane.
    Vec3 specular_point(const PlanePose &plane, const Vec3 &u_tx, const Vec3 &u_rx);

    bool is_finite(const Vec3 &p);
}

#endif
