// Copyright 2026 The qdiff Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <cstdint>
#include <fstream>
#include <iterator>
#include <span>
#include <string>
#include <vector>

#include <zlib.h>

#include "error.hpp"

namespace qdiff {

inline bool ends_with(const std::string &s, const std::string &suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

/// Whole file contents, gunzipped when the name ends in ".gz".
inline std::vector<std::uint8_t> read_file_bytes(const std::string &path) {
    std::vector<std::uint8_t> out;
    if (ends_with(path, ".gz")) {
        gzFile f = gzopen(path.c_str(), "rb");
        if (f == nullptr) {
            fail(ErrorCode::Io, "cannot open " + path);
        }
        std::uint8_t buf[1 << 16];
        int got = 0;
        while ((got = gzread(f, buf, sizeof buf)) > 0) {
            out.insert(out.end(), buf, buf + got);
        }
        const bool bad = got < 0;
        gzclose(f);
        if (bad) {
            fail(ErrorCode::TruncatedFile, "corrupt gzip stream in " + path);
        }
        return out;
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorCode::Io, "cannot open " + path);
    }
    out.assign(std::istreambuf_iterator<char>(in), {});
    return out;
}

inline void write_bytes(const std::string &path,
                        std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        fail(ErrorCode::Io, "cannot write " + path);
    }
    out.write(reinterpret_cast<const char *>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

} // namespace qdiff
