// Command-line front end: encode images into scheme cost tables, simulate
// dumped circuits, and compare images by PSNR.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qprep/pipeline.hpp"

namespace {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw qprep::Error("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw qprep::Error("cannot open file for writing: " + path);
    out << text;
    if (!out) throw qprep::Error("failed writing file: " + path);
}

std::string basename_of(const std::string& path) {
    const std::size_t slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    const std::size_t dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return name;
}

std::vector<qprep::Scheme> parse_schemes(const std::string& scheme) {
    if (scheme == "scmfrqi") return {qprep::Scheme::Scmfrqi};
    if (scheme == "efrqi") return {qprep::Scheme::Efrqi};
    if (scheme == "both") return {qprep::Scheme::Scmfrqi, qprep::Scheme::Efrqi};
    throw qprep::ArgumentError("unknown scheme '" + scheme + "' (want scmfrqi|efrqi|both)");
}

int run_encode(const std::string& input, const std::string& mode, const std::string& scheme,
               const std::vector<std::int32_t>& q_factors, std::size_t block,
               const std::string& csv_path, const std::string& dump_circuit_path,
               const std::string& dump_coeffs_path, bool verify, std::size_t verify_blocks) {
    qprep::RunConfig cfg;
    cfg.mode = mode == "dct" ? qprep::RunMode::Dct : qprep::RunMode::Direct;
    cfg.schemes = parse_schemes(scheme);
    cfg.q_factors = q_factors;
    cfg.block_size = block;
    cfg.simulate = verify;
    cfg.verify_blocks = verify_blocks;
    cfg.image_label = basename_of(input);
    cfg.csv_path = csv_path;
    cfg.dump_circuit_path = dump_circuit_path;
    cfg.dump_coeffs_path = dump_coeffs_path;

    const qprep::Image img = qprep::load_image(input);
    const std::vector<qprep::RatePoint> points = cfg.mode == qprep::RunMode::Dct
                                                     ? qprep::run_dct(img, cfg)
                                                     : qprep::run_direct(img, cfg);

    for (const qprep::RatePoint& p : qprep::rate_table(points)) {
        if (p.scheme != cfg.schemes.front()) continue;
        std::cerr << "channel " << p.channel << " q_factor " << p.q_factor << ": value qubits "
                  << p.value_bits << ", nonzero entries " << p.cost.n_tcn << '\n';
    }

    const std::string csv = qprep::to_csv(points);
    if (cfg.csv_path.empty())
        std::cout << csv;
    else
        write_text_file(cfg.csv_path, csv);

    if (!cfg.dump_circuit_path.empty()) {
        const auto circuit = qprep::representative_circuit(img, cfg);
        if (circuit) {
            write_text_file(cfg.dump_circuit_path, qprep::dump_circuit(*circuit));
            std::cerr << "wrote circuit of the first nonzero block to " << cfg.dump_circuit_path
                      << '\n';
        } else {
            std::cerr << "no nonzero block; nothing to dump to " << cfg.dump_circuit_path << '\n';
        }
    }
    if (!cfg.dump_coeffs_path.empty()) {
        if (cfg.mode != qprep::RunMode::Dct)
            throw qprep::ArgumentError("--dump-coeffs requires --mode dct");
        const qprep::Image gray = qprep::split_channel(img, 0);
        const qprep::CoefficientGrid grid =
            qprep::compute_quantized_coefficients(gray, cfg.q_factors.front(), cfg.block_size);
        write_text_file(cfg.dump_coeffs_path, qprep::coefficients_to_json(grid));
        std::cerr << "wrote first-channel coefficients (q_factor " << cfg.q_factors.front()
                  << ") to " << cfg.dump_coeffs_path << '\n';
    }

    if (verify) {
        bool all_passed = true;
        for (const qprep::VerifyRecord& rec : qprep::verify_run(img, cfg)) {
            std::cerr << "verify " << qprep::scheme_name(rec.scheme) << " channel " << rec.channel
                      << " q_factor " << rec.q_factor << " block (" << rec.block_y << ','
                      << rec.block_x << "): " << (rec.result.pass ? "pass" : "FAIL")
                      << " fidelity " << rec.result.fidelity << " branches "
                      << rec.result.branches;
            if (!rec.result.pass) std::cerr << " (" << rec.result.message << ')';
            std::cerr << '\n';
            all_passed = all_passed && rec.result.pass;
        }
        if (!all_passed) throw qprep::Error("simulation verification failed");
    }
    return 0;
}

int run_simulate(const std::string& circuit_path, const std::string& reset,
                 const std::string& dump_state_path) {
    const qprep::ResetMode mode =
        reset == "physical" ? qprep::ResetMode::Physical : qprep::ResetMode::Idealized;
    const qprep::Circuit circuit = qprep::parse_circuit(read_text_file(circuit_path));
    const qprep::EnsembleState state = qprep::run_circuit(circuit, mode);

    std::cout << "qubits " << state.layout.total() << ", branches " << state.branches.size()
              << ", total weight " << qprep::total_weight(state) << '\n';
    if (state.branches.size() == 1) {
        try {
            const qprep::ExtractedMap extracted = qprep::extract_map(state);
            std::cout << "extracted " << extracted.entries.size()
                      << " entries, position amplitude " << extracted.amplitude_per_position
                      << '\n';
            for (const qprep::MapEntry& e : extracted.entries)
                std::cout << "entry y=" << e.y << " x=" << e.x << " value=" << e.value << '\n';
        } catch (const qprep::Error& e) {
            std::cout << "state is not a basis-encoded map: " << e.what() << '\n';
        }
    }
    if (!dump_state_path.empty()) write_text_file(dump_state_path, qprep::dump_state(state));
    return 0;
}

int run_psnr(const std::string& a_path, const std::string& b_path) {
    const double value = qprep::psnr(qprep::load_image(a_path), qprep::load_image(b_path));
    if (std::isinf(value))
        std::cout << "inf\n";
    else
        std::cout << value << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum image state-preparation and compression workbench"};
    app.require_subcommand(1);

    // encode
    std::string input, mode, scheme = "both", csv_path, dump_circuit_path, dump_coeffs_path;
    std::vector<std::int32_t> q_factors;
    std::size_t block = 4, verify_blocks = 8;
    bool verify = false;
    CLI::App* encode = app.add_subcommand("encode", "encode an image and report bit rates");
    encode->add_option("--input", input, "PGM/PPM input image")->required();
    encode->add_option("--mode", mode, "direct|dct")
        ->required()
        ->check(CLI::IsMember({"direct", "dct"}));
    encode->add_option("--scheme", scheme, "scmfrqi|efrqi|both")
        ->check(CLI::IsMember({"scmfrqi", "efrqi", "both"}));
    encode->add_option("--q", q_factors, "quantization factors (dct mode)")->delimiter(',');
    encode->add_option("--block", block, "quantum block size S (power of two)");
    encode->add_option("--csv", csv_path, "write the rate table CSV here (default stdout)");
    encode->add_option("--dump-circuit", dump_circuit_path,
                       "write the first nonzero block's circuit here");
    encode->add_option("--dump-coeffs", dump_coeffs_path,
                       "write first-channel quantized coefficients as JSON (dct mode)");
    encode->add_flag("--verify", verify, "simulate sampled blocks and check the prepared state");
    encode->add_option("--verify-blocks", verify_blocks, "blocks sampled per channel run");

    // simulate
    std::string circuit_path, reset = "idealized", dump_state_path;
    CLI::App* simulate = app.add_subcommand("simulate", "run a dumped circuit");
    simulate->add_option("--circuit", circuit_path, "circuit text file")->required();
    simulate->add_option("--reset", reset, "idealized|physical")
        ->check(CLI::IsMember({"idealized", "physical"}));
    simulate->add_option("--dump-state", dump_state_path, "write nonzero amplitudes here");

    // psnr
    std::string a_path, b_path;
    CLI::App* psnr_cmd = app.add_subcommand("psnr", "PSNR between two images");
    psnr_cmd->add_option("--a", a_path, "first image")->required();
    psnr_cmd->add_option("--b", b_path, "second image")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (encode->parsed())
            return run_encode(input, mode, scheme, q_factors, block, csv_path,
                              dump_circuit_path, dump_coeffs_path, verify, verify_blocks);
        if (simulate->parsed()) return run_simulate(circuit_path, reset, dump_state_path);
        if (psnr_cmd->parsed()) return run_psnr(a_path, b_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
