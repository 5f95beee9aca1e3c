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

#include "qmeas/recordio.hpp"

#include <charconv>
#include <system_error>

namespace qmeas {

RecordCsvWriter::RecordCsvWriter(const std::string &path) : path_(path), out_(path) {
    if (!out_) {
        throw std::runtime_error("cannot open for writing: " + path);
    }
    out_ << kRecordCsvHeader << '\n';
}

void RecordCsvWriter::write(std::span<const RunRecord> records) {
    // Worst case row: 20 (u64) + 11 (int) + 1 + 2 commas + newline = 35 bytes.
    char buf[64];
    char *const end = buf + sizeof buf - 1;
    for (const auto &r : records) {
        char *p = buf;
        p = std::to_chars(p, end, r.run).ptr;
        *p++ = ',';
        p = std::to_chars(p, end, r.k).ptr;
        *p++ = ',';
        p = std::to_chars(p, end, r.l).ptr;
        *p++ = '\n';
        out_.write(buf, p - buf);
    }
    if (!out_) {
        throw std::runtime_error("write failed: " + path_);
    }
}

void RecordCsvWriter::close() {
    out_.flush();
    if (!out_) {
        throw std::runtime_error("write failed: " + path_);
    }
    out_.close();
}

void write_records_csv(const std::string &path, std::span<const RunRecord> records) {
    RecordCsvWriter writer(path);
    writer.write(records);
    writer.close();
}

namespace {

// Parses one strictly-formatted integer field ending at `sep` (or
// end-of-string when sep == '\0').
template <typename T>
const char *parse_field(const char *begin, const char *end, char sep, T &value,
                        std::size_t line, const char *name) {
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) {
        throw CsvParseError(line, std::string("bad ") + name + " field");
    }
    if (sep == '\0') {
        if (ptr != end) throw CsvParseError(line, "trailing characters");
    } else {
        if (ptr == end || *ptr != sep) {
            throw CsvParseError(line, std::string("expected ',' after ") + name);
        }
        ++ptr;
    }
    return ptr;
}

}  // namespace

std::vector<RunRecord> read_records_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open for reading: " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line != kRecordCsvHeader) {
        throw CsvParseError(1, "missing 'run,k,l' header");
    }
    std::vector<RunRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            throw CsvParseError(line_no, "empty row");
        }
        const char *begin = line.data();
        const char *end = begin + line.size();
        RunRecord r;
        begin = parse_field(begin, end, ',', r.run, line_no, "run");
        begin = parse_field(begin, end, ',', r.k, line_no, "k");
        parse_field(begin, end, '\0', r.l, line_no, "l");
        if (r.l != 1 && r.l != 2) {
            throw CsvParseError(line_no, "l must be 1 or 2");
        }
        records.push_back(r);
    }
    if (in.bad()) {
        throw std::runtime_error("read failed: " + path);
    }
    return records;
}

}  // namespace qmeas
