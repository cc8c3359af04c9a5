/*
 Copyright 2026 The netsched Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef NETSCHED_TEST_SUPPORT_HPP
#define NETSCHED_TEST_SUPPORT_HPP

#include "netsched/linalg.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>
#include <string>

namespace netsched::testing {

inline ::testing::AssertionResult matrices_near(const Matrix& a, const Matrix& b, double tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        return ::testing::AssertionFailure() << "shape " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x"
                                             << b.cols();
    const double err = (a - b).cwiseAbs().maxCoeff();
    if (err <= tol) return ::testing::AssertionSuccess();
    return ::testing::AssertionFailure() << "max entrywise error " << err << " > " << tol << "\n" << a << "\nvs\n" << b;
}

inline Matrix scalar(double x) { return Matrix::Constant(1, 1, x); }

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& stem) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / (stem + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    [[nodiscard]] std::string str() const { return path_.string(); }

private:
    std::filesystem::path path_;
};

}  // namespace netsched::testing

#endif  // NETSCHED_TEST_SUPPORT_HPP
