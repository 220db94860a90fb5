#pragma once

#include "cmclab/grid_mesh.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace cmclab {

using Json = nlohmann::ordered_json;

// Numbers with 17 significant digits.
std::string format_real(double v);

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Binary little-endian PLY with double vertex positions and triangle faces.
void write_ply(const std::filesystem::path& path, const GridMesh& mesh);

struct PlyData {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> faces;
};
PlyData read_ply(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const Json& j);
Json read_json(const std::filesystem::path& path);

std::string sha256_file(const std::filesystem::path& path);
std::string sha256_string(const std::string& data);

} // namespace cmclab
