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

#ifndef NFCHAN_TYPES_HPP
#define NFCHAN_TYPES_HPP

#include <Eigen/Core>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace nfchan
{
    using cplx = std::complex<double>;
    using ComplexMatrix = Eigen::MatrixXcd; // rows = receive antennas, cols = transmit antennas
    using ComplexVector = Eigen::VectorXcd;

    inline constexpr double speed_of_light = 299792458.0; // [m/s]
    inline constexpr double pi = std::numbers::pi;

    inline constexpr double wavelength_of(double carrier_hz) { return speed_of_light / carrier_hz; }
    inline constexpr double wavenumber_of(double wavelength) { return 2.0 * pi / wavelength; }

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

    // Stateless 64-bit mixer (splitmix64 finalizer); used to derive independent sub-seeds
    inline constexpr std::uint64_t mix_seed(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return x ^ (x >> 31);
    }

    inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0)
    {
        return mix_seed(mix_seed(mix_seed(seed ^ mix_seed(a)) ^ mix_seed(b + 0x632BE59BD9B4E019ull)) ^ mix_seed(c + 0x8CB92BA72F3D8DD7ull));
    }
}

#endif
