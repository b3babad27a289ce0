#pragma once

#include "helmdual/concentration.hpp"
#include "helmdual/field.hpp"
#include "helmdual/kernel.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace helmdual::io {

using json = nlohmann::json;

/// Field dump: raw little-endian float64, row-major with axis 0 fastest,
/// no header; metadata goes to a sidecar JSON `<path>.json`
/// {dimension, half_width, samples_per_axis, role}.
void dump_field(const ScalarField& f, const std::filesystem::path& path, const std::string& role);
ScalarField load_field(const std::filesystem::path& path);

/// SHA-256 of a file's contents, lowercase hex.
std::string sha256_file(const std::filesystem::path& path);
std::string sha256_bytes(const void* data, std::size_t len);

/// Manifest form of a kernel band-split report.
json to_json(const BoundReport& rep);

/// CSV writers for the sweep outputs.
void write_sweep_summary(const ConcentrationReport& rep, const std::filesystem::path& path);
void write_energy_csv(const ConcentrationReport& rep, const std::filesystem::path& path);
void write_barycenter_csv(const ConcentrationReport& rep, const std::filesystem::path& path);
/// Shell-averaged |u| radial profiles of the finest solution and the limit.
void write_radial_profile_csv(const ConcentrationReport& rep, const std::filesystem::path& path);

/// Atomic JSON write (temp file + rename).
void write_json_atomic(const json& j, const std::filesystem::path& path);

} // namespace helmdual::io
