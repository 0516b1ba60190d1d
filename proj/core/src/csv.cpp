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

#include "nfchan/csv.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <ostream>

namespace nfchan
{
    std::string format_double(double x)
    {
        if (std::isnan(x))
            return "nan";
        if (x == 0.0)
            x = 0.0; // fold -0
        std::array<char, 32> buf{};
        const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
        return std::string(buf.data(), res.ptr);
    }

    void CsvWriter::comment(std::string_view key, std::string_view value)
    {
        out_ << "# " << key << ": " << value << '\n';
    }

    void CsvWriter::header(std::initializer_list<std::string_view> columns)
    {
        bool first = true;
        for (auto c : columns)
        {
            put(c, first);
            first = false;
        }
        end_row();
    }

    void CsvWriter::header(const std::vector<std::string> &columns)
    {
        for (std::size_t i = 0; i < columns.size(); ++i)
            put(std::string_view(columns[i]), i == 0);
        end_row();
    }

    void CsvWriter::put(double x, bool first)
    {
        if (!first)
            out_ << ',';
        out_ << format_double(x);
    }

    void CsvWriter::put(std::int64_t x, bool first)
    {
        if (!first)
            out_ << ',';
        out_ << x;
    }

    void CsvWriter::put(std::string_view s, bool first)
    {
        if (!first)
            out_ << ',';
        out_ << s;
    }

    void CsvWriter::end_row() { out_ << '\n'; }
}
