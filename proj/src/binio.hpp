#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>

namespace factorforge::binio {

void put_u32le(std::ostream& out, std::uint32_t v);
void put_f64le(std::ostream& out, double v);
bool get_u32le(std::istream& in, std::uint32_t& v);
bool get_f64le(std::istream& in, double& v);

/// Writes to "<path>.tmp" then renames over path. Raises io-error on any
/// stream or filesystem failure.
void atomic_write_file(const std::filesystem::path& path,
                       const std::function<void(std::ostream&)>& writer);

/// Opens for binary reading; raises io-error if the file cannot be opened.
std::ifstream open_binary_input(const std::filesystem::path& path);

} // namespace factorforge::binio
