#include "helpers.hpp"

#include <filesystem>
#include <unistd.h>

namespace fpt::testing {

std::string scratch_path(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("fpt_tests_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return (dir / name).string();
}

}  // namespace fpt::testing
