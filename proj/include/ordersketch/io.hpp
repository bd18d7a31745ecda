#pragma once

#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

namespace ordersketch::io {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read '" + path.string() + "'");
    return in;
}

/// Runs `parse(stream)` and prefixes any error with the file name.
template <typename Parse>
auto parse_file(const std::filesystem::path& path, Parse&& parse) {
    auto in = open_input(path);
    try {
        return parse(in);
    } catch (const std::exception& e) {
        throw IoError(path.string() + ": " + e.what());
    }
}

/// Output files staged in memory and committed together: each is written to
/// a sibling temporary and renamed into place only after all writes succeed.
class StagedOutputs {
public:
    std::ostringstream& add(std::filesystem::path path) {
        files_.push_back({std::move(path), std::make_unique<std::ostringstream>()});
        return *files_.back().second;
    }

    void commit() {
        std::vector<std::filesystem::path> temps;
        auto cleanup = [&] {
            std::error_code ec;
            for (const auto& t : temps) std::filesystem::remove(t, ec);
        };
        for (const auto& [path, buf] : files_) {
            auto tmp = path;
            tmp += ".tmp";
            temps.push_back(tmp);
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            const auto data = buf->str();
            out.write(data.data(), static_cast<std::streamsize>(data.size()));
            out.close();
            if (!out) {
                cleanup();
                throw IoError("cannot write '" + path.string() + "'");
            }
        }
        for (std::size_t i = 0; i < files_.size(); ++i) {
            std::error_code ec;
            std::filesystem::rename(temps[i], files_[i].first, ec);
            if (ec) {
                cleanup();
                throw IoError("cannot move output into place at '" + files_[i].first.string() + "': " + ec.message());
            }
        }
        files_.clear();
    }

private:
    std::vector<std::pair<std::filesystem::path, std::unique_ptr<std::ostringstream>>> files_;
};

}  // namespace ordersketch::io
