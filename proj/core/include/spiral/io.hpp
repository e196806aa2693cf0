#pragma once

// CSV output helpers.  Writes go to a temp file in the target directory and
// are renamed into place; floats are emitted with 17 significant digits so
// reruns produce byte-identical files.

#include <string>
#include <vector>

namespace spiral {

std::string format_double(double v);

void atomic_write(const std::string& path, const std::string& content);

void ensure_directory(const std::string& path);

}  // namespace spiral
