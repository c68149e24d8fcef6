#ifndef TSOST_TESTS_RUN_HPP
#define TSOST_TESTS_RUN_HPP

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

namespace runner {

struct Result {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

/// Runs the CLI with a shell-quoted argument string; stdin_text is piped in
/// when non-empty.
inline Result run_cli(const std::string& args, const std::string& stdin_text = "") {
    static int counter = 0;
    const auto dir = std::filesystem::temp_directory_path();
    const auto tag = std::to_string(::getpid()) + "_" + std::to_string(counter++);
    const auto err_path = dir / ("tsost_err_" + tag);
    const auto in_path = dir / ("tsost_in_" + tag);

    std::string cmd = std::string("'") + TSOST_CLI_PATH + "' " + args;
    if (!stdin_text.empty()) {
        std::ofstream(in_path, std::ios::binary) << stdin_text;
        cmd += " < '" + in_path.string() + "'";
    } else {
        cmd += " < /dev/null";
    }
    cmd += " 2> '" + err_path.string() + "'";

    Result r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return r;
    }
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) {
        r.out.append(buf, n);
    }
    const int status = ::pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err_path);
    std::filesystem::remove(err_path);
    std::filesystem::remove(in_path);
    return r;
}

inline std::string golden(const std::string& name) {
    return slurp(std::filesystem::path(TSOST_GOLDEN_DIR) / name);
}

} // namespace runner

#endif // TSOST_TESTS_RUN_HPP
