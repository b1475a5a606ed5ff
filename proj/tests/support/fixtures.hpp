#pragma once

#include <string>

#include "semstore/capture.hpp"
#include "semstore/io.hpp"

namespace testsupport {

inline semstore::capture::CaptureResult capture_seed(const std::string& dir) {
  using semstore::io::read_file;
  return semstore::capture::run_capture_pipeline(read_file(dir + "/summary.txt"), read_file(dir + "/terms.tsv"),
                                                 read_file(dir + "/store.onts"), semstore::ns::kStore);
}

}  // namespace testsupport
