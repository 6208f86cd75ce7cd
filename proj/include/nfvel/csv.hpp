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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace nfvel
{
    // Empty cell (skipped field) | text | integer | real
    using CsvCell = std::variant<std::monostate, std::string, std::int64_t, double>;

    std::string format_real(double value); // %.12g

    /// '#' metadata lines must all be written before the header; rows after it.
    class CsvWriter
    {
    public:
        explicit CsvWriter(std::ostream &out) : out_(out) {}

        void comment(const std::string &text);
        void meta(const std::string &key, const std::string &value);
        void meta(const std::string &key, double value) { meta(key, format_real(value)); }
        void header(const std::vector<std::string> &columns);
        void row(const std::vector<CsvCell> &cells);

        std::size_t rows_written() const { return rows_; }

    private:
        std::ostream &out_;
        std::size_t columns_ = 0;
        std::size_t rows_ = 0;
        bool header_done_ = false;
    };
}
