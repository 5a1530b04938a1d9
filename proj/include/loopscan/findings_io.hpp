#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "loopscan/detectors.hpp"
#include "loopscan/response_parser.hpp"

namespace loopscan {

struct FindingsIoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FindingsFile {
    std::vector<Finding> findings;
    std::string config_fingerprint;
};

// {"version":1,"config_fingerprint":...,"findings":[{sample_id,line,category,
//  kind,message,origin,confidence}]} — origin is "rule" or "model:<name>".
void write_findings(const std::filesystem::path& path, const std::vector<Finding>& findings,
                    const std::string& config_fingerprint);

FindingsFile read_findings(const std::filesystem::path& path);

void write_rejections(const std::filesystem::path& path, const std::vector<Rejection>& rejections,
                      const std::string& config_fingerprint);

}  // namespace loopscan
