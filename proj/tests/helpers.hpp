#pragma once

#include <cstdlib>
#include <filesystem>
#include <string>
#include <unistd.h>

#include "sentvol/corpus.hpp"
#include "sentvol/dates.hpp"

inline std::string source_dir() {
    if (const char* env = std::getenv("SENTVOL_SOURCE_DIR")) return env;
    return ".";
}

inline std::string test_data_path(const std::string& name) {
    return source_dir() + "/tests/data/" + name;
}

inline std::string repo_data_path(const std::string& name) {
    return source_dir() + "/data/" + name;
}

struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        path = std::filesystem::temp_directory_path() /
               ("sentvol_" + tag + "_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }

    std::string file(const std::string& name) const {
        return (path / name).string();
    }
};

inline sentvol::Document make_doc(std::string id, const std::string& date,
                                  std::string text,
                                  sentvol::Source source = sentvol::Source::headline) {
    sentvol::Document doc;
    doc.id = std::move(id);
    doc.utc_date = sentvol::parse_date(date);
    doc.ts_utc = sentvol::day_number(doc.utc_date) * 86400 + 43200;
    doc.text = std::move(text);
    doc.source = source;
    return doc;
}
