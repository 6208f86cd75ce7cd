// SPDX-License-Identifier: Apache-2.0
//
// nfvel: near-field velocity bounds for modular linear arrays
// Copyright (C) 2026 nfvel contributors
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

#include "nfvel/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace nfvel
{
    std::string format_real(double value)
    {
        if (std::isnan(value))
            return "nan";
        if (std::isinf(value))
            return value > 0 ? "inf" : "-inf";
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", value);
        return buf;
    }

    namespace
    {
        std::string quote(const std::string &s)
        {
            if (s.find_first_of(",\"\n") == std::string::npos)
                return s;
            std::string out = "\"";
            for (char c : s)
                out += c == '"' ? std::string("\"\"") : std::string(1, c);
            return out + "\"";
        }
    }

    void CsvWriter::comment(const std::string &text)
    {
        if (header_done_)
            throw std::logic_error("CsvWriter: metadata after header");
        out_ << "# " << text << '\n';
    }

    void CsvWriter::meta(const std::string &key, const std::string &value) { comment(key + " = " + value); }

    void CsvWriter::header(const std::vector<std::string> &columns)
    {
        if (header_done_)
            throw std::logic_error("CsvWriter: header written twice");
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << (i ? "," : "") << quote(columns[i]);
        out_ << '\n';
        columns_ = columns.size();
        header_done_ = true;
    }

    void CsvWriter::row(const std::vector<CsvCell> &cells)
    {
        if (!header_done_ || cells.size() != columns_)
            throw std::logic_error("CsvWriter: row does not match header");
        for (std::size_t i = 0; i < cells.size(); ++i)
        {
            if (i)
                out_ << ',';
            std::visit(
                [this](const auto &v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::string>)
                        out_ << quote(v);
                    else if constexpr (std::is_same_v<T, std::int64_t>)
                        out_ << v;
                    else if constexpr (std::is_same_v<T, double>)
                        out_ << format_real(v);
                },
                cells[i]);
        }
        out_ << '\n';
        ++rows_;
    }
}
