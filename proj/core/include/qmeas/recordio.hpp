// Copyright 2026 The qmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qmeas/simulate.hpp"

namespace qmeas {

/// Record CSV format, bit-exact: header line "run,k,l", then one row per
/// run as decimal integers, '\n' line endings, no padding.
inline constexpr const char *kRecordCsvHeader = "run,k,l";

struct CsvParseError : std::runtime_error {
    CsvParseError(std::size_t line, const std::string &what_arg)
        : std::runtime_error("line " + std::to_string(line) + ": " + what_arg),
          line_number(line) {}
    std::size_t line_number;
};

/// Streaming writer; usable directly as a RecordSink.
class RecordCsvWriter {
  public:
    /// Opens (truncates) and writes the header. Throws std::runtime_error on
    /// I/O failure.
    explicit RecordCsvWriter(const std::string &path);

    void write(std::span<const RunRecord> records);

    /// Flushes and verifies the stream; call before relying on the file.
    void close();

    void operator()(std::span<const RunRecord> records) { write(records); }

  private:
    std::string path_;
    std::ofstream out_;
};

void write_records_csv(const std::string &path, std::span<const RunRecord> records);

/// Strict reader: validates the header and every row; throws CsvParseError
/// with the offending line number. An empty data section is legal here and
/// handled by callers.
std::vector<RunRecord> read_records_csv(const std::string &path);

}  // namespace qmeas
