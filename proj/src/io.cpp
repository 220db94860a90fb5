#include "cmclab/io.hpp"

#include "cmclab/errors.hpp"

#include <fmt/core.h>
#include <openssl/evp.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace cmclab {

namespace {

std::ofstream open_out(const std::filesystem::path& path, bool binary)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
    require(f.good(), ErrorCode::io, fmt::format("cannot write {}", path.string()));
    return f;
}

template <class T>
void put_le(std::ostream& os, T v)
{
    static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);
    char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    os.write(b, sizeof(T));
}

template <class T>
T get_le(std::istream& is)
{
    char b[sizeof(T)];
    is.read(b, sizeof(T));
    require(is.good(), ErrorCode::io, "truncated PLY body");
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
}

std::string hex(const unsigned char* d, unsigned n)
{
    std::string s;
    for (unsigned i = 0; i < n; ++i) s += fmt::format("{:02x}", d[i]);
    return s;
}

std::string sha256_stream(std::istream& is)
{
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    char buf[1 << 16];
    while (is) {
        is.read(buf, sizeof buf);
        if (is.gcount() > 0) EVP_DigestUpdate(ctx, buf, static_cast<size_t>(is.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    return hex(md, len);
}

} // namespace

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows)
{
    auto f = open_out(path, false);
    for (size_t i = 0; i < header.size(); ++i) f << (i ? "," : "") << header[i];
    f << '\n';
    for (const auto& row : rows) {
        require(row.size() == header.size(), ErrorCode::io, "CSV row width differs from header");
        for (size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << format_real(row[i]);
        f << '\n';
    }
}

void write_ply(const std::filesystem::path& path, const GridMesh& mesh)
{
    const auto faces = mesh.faces();
    auto f = open_out(path, true);
    f << "ply\nformat binary_little_endian 1.0\n"
      << "element vertex " << mesh.vertices.size() << "\n"
      << "property double x\nproperty double y\nproperty double z\n"
      << "element face " << faces.size() << "\n"
      << "property list uchar int vertex_indices\nend_header\n";
    for (const auto& v : mesh.vertices) {
        put_le(f, v.x);
        put_le(f, v.y);
        put_le(f, v.z);
    }
    for (const auto& t : faces) {
        put_le<std::uint8_t>(f, 3);
        for (int a : t) put_le<std::int32_t>(f, a);
    }
    require(f.good(), ErrorCode::io, fmt::format("write failed for {}", path.string()));
}

PlyData read_ply(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    require(f.good(), ErrorCode::io, fmt::format("cannot read {}", path.string()));
    std::string line;
    size_t nv = 0, nf = 0;
    bool binary = false;
    std::getline(f, line);
    require(line == "ply", ErrorCode::io, "not a PLY file");
    while (std::getline(f, line) && line != "end_header") {
        std::istringstream ls(line);
        std::string a, b;
        ls >> a >> b;
        if (a == "format") binary = b == "binary_little_endian";
        if (a == "element" && b == "vertex") ls >> nv;
        if (a == "element" && b == "face") ls >> nf;
    }
    require(binary, ErrorCode::io, "only binary little-endian PLY is supported");
    PlyData d;
    for (size_t i = 0; i < nv; ++i) {
        const double x = get_le<double>(f), y = get_le<double>(f), z = get_le<double>(f);
        d.vertices.emplace_back(x, y, z);
    }
    for (size_t i = 0; i < nf; ++i) {
        require(get_le<std::uint8_t>(f) == 3, ErrorCode::io, "non-triangle face");
        std::array<int, 3> t;
        for (int& a : t) a = get_le<std::int32_t>(f);
        d.faces.push_back(t);
    }
    return d;
}

void write_json(const std::filesystem::path& path, const Json& j)
{
    auto f = open_out(path, false);
    f << j.dump(2) << '\n';
}

Json read_json(const std::filesystem::path& path)
{
    std::ifstream f(path);
    require(f.good(), ErrorCode::io, fmt::format("cannot read {}", path.string()));
    try {
        return Json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorCode::io, fmt::format("{}: {}", path.string(), e.what()));
    }
}

std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream f(path, std::ios::binary);
    require(f.good(), ErrorCode::io, fmt::format("cannot read {}", path.string()));
    return sha256_stream(f);
}

std::string sha256_string(const std::string& data)
{
    std::istringstream s(data);
    return sha256_stream(s);
}

} // namespace cmclab
