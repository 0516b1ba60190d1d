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

#include "nfchan/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nfchan
{
    bool is_finite(const Vec3 &p)
    {
        return std::isfinite(p.x()) && std::isfinite(p.y()) && std::isfinite(p.z());
    }

    PlanePose PlanePose::make(const Vec3 &origin, const Vec3 &normal, const Vec3 &axis_u)
    {
        if (!is_finite(origin) || !is_finite(normal) || !is_finite(axis_u))
            throw std::invalid_argument("PlanePose: non-finite input");
        const double nn = normal.norm();
        if (nn == 0.0)
            throw std::invalid_argument("PlanePose: zero normal");

        PlanePose pose;
        pose.origin_ = origin;
        pose.normal_ = normal / nn;

        // Gram-Schmidt against the normal
        Vec3 u = axis_u - axis_u.dot(pose.normal_) * pose.normal_;
        const double un = u.norm();
        if (un < 1e-9 * std::max(1.0, axis_u.norm()))
            throw std::invalid_argument("PlanePose: in-plane axis parallel to normal");
        pose.axis_u_ = u / un;
        pose.axis_v_ = pose.normal_.cross(pose.axis_u_);
        return pose;
    }

    std::pair<double, double> PlanePose::in_plane(const Vec3 &p) const
    {
        const Vec3 d = p - origin_;
        return {axis_u_.dot(d), axis_v_.dot(d)};
    }

    LocalFrame LocalFrame::make(const Vec3 &origin, const Vec3 &z_direction)
    {
        const double n = z_direction.norm();
        if (!(n > 0.0) || !is_finite(origin))
            throw std::invalid_argument("LocalFrame: degenerate axis");
        return LocalFrame{origin, z_direction / n};
    }

    LocalFrame LocalFrame::of_pair(const Vec3 &a, const Vec3 &b)
    {
        return make(0.5 * (a + b), b - a);
    }

    Vec3 mirror_image(const Vec3 &p, const PlanePose &plane)
    {
        return p - 2.0 * plane.signed_distance(p) * plane.normal();
    }

    double elevation_in_frame(const Vec3 &u, const LocalFrame &frame)
    {
        const Vec3 d = u - frame.origin;
        const double r = d.norm();
        if (r == 0.0)
            throw std::invalid_argument("coincident point");
        const double s = std::clamp(frame.z_axis.dot(d) / r, -1.0, 1.0);
        return std::asin(s);
    }

    std::pair<double, double> incidence_cosines(const PlanePose &plane, const Vec3 &u_tx, const Vec3 &u_rx)
    {
        auto cosine = [&](const Vec3 &p)
        {
            const Vec3 d = p - plane.origin();
            const double h = std::abs(plane.normal().dot(d));
            const double r = d.norm();
            if (h == 0.0 || r == 0.0)
                throw std::invalid_argument("grazing geometry");
            return std::min(1.0, h / r);
        };
        return {cosine(u_tx), cosine(u_rx)};
    }

    Vec3 specular_point(const PlanePose &plane, const Vec3 &u_tx, const Vec3 &u_rx)
    {
        const double h_tx = plane.signed_distance(u_tx);
        const double h_rx = plane.signed_distance(u_rx);
        if (h_tx == 0.0 || h_rx == 0.0 || (h_tx > 0.0) != (h_rx > 0.0))
            throw std::invalid_argument("no reflection path");

        // The image of the Tx sits at -h_tx; the segment crosses the plane at t = h_tx / (h_tx + h_rx)
        const Vec3 v_tx = mirror_image(u_tx, plane);
        const double t = h_tx / (h_tx + h_rx);
        return v_tx + t * (u_rx - v_tx);
    }
}
