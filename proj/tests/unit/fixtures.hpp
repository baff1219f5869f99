#pragma once

#include <atomic>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "pfrac/ifs.hpp"

namespace pfrac::test {

inline IfsCode make_code(std::vector<AffineMap> maps) {
    IfsCode code;
    code.probs = determinant_probs(maps);
    code.maps = std::move(maps);
    return code;
}

/// Half-scale maps with fixed points (0,0), (1,0), (0,1).
inline IfsCode sierpinski() {
    return make_code({{0.5, 0, 0, 0.5, 0, 0}, {0.5, 0, 0, 0.5, 0.5, 0}, {0.5, 0, 0, 0.5, 0, 0.5}});
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::atomic<int> counter{0};
        path_ = std::filesystem::temp_directory_path() /
                ("pfrac_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace pfrac::test
