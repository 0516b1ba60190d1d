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

#ifndef NFCHAN_CSV_HPP
#define NFCHAN_CSV_HPP

#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace nfchan
{
    // Shortest round-trip decimal representation (std::to_chars), so output bytes are reproducible
    std::string format_double(double x);

    // Minimal CSV emitter: '#'-prefixed metadata lines, one header, numeric rows
    class CsvWriter
    {
    public:
        explicit CsvWriter(std::ostream &out) : out_(out) {}

        void comment(std::string_view key, std::string_view value);
        void header(std::initializer_list<std::string_view> columns);
        void header(const std::vector<std::string> &columns);

        template <typename... Ts>
        void row(const Ts &...values)
        {
            bool first = true;
            ((put(values, first), first = false), ...);
            end_row();
        }

    private:
        void put(double x, bool first);
        void put(std::int64_t x, bool first);
        void put(std::string_view s, bool first);
        template <std::integral I>
            requires(!std::same_as<I, std::int64_t> && !std::same_as<I, bool>)
        void put(I x, bool first) { put(static_cast<std::int64_t>(x), first); }
        void put(float x, bool first) { put(static_cast<double>(x), first); }
        void put(const std::string &s, bool first) { put(std::string_view(s), first); }
        void put(const char *s, bool first) { put(std::string_view(s), first); }
        void end_row();

        std::ostream &out_;
    };
}

#endif
