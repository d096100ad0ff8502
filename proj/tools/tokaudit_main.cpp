#include "tokaudit/audit.hpp"
#include "tokaudit/bpe_tokenizer.hpp"
#include "tokaudit/bpe_trainer.hpp"
#include "tokaudit/errors.hpp"
#include "tokaudit/numeric_tokenizer.hpp"
#include "tokaudit/report.hpp"
#include "tokaudit/wisdm.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>

namespace {

using tokaudit::AggregateStat;
using tokaudit::SensorRow;
using tokaudit::Tokenizer;
using ordered_json = nlohmann::ordered_json;

// ---- shared option bundles -------------------------------------------------

struct TokenizerOpts {
    std::string vocab_path;
    std::string merges_path;
    std::string name;
    std::string utf8 = "error";
    bool numtok = false;
};

struct InputOpts {
    std::string text;
    bool use_stdin = false;
    std::string wisdm_path;
};

struct TransformOpts {
    std::size_t rows = 0;       // keep first N rows; 0 = all
    std::size_t downsample = 1; // keep every k-th row
    std::size_t window = 0;     // aggregate window; 0 = off
    std::string stat = "mean";
    int round_decimals = -1; // -1 = off
};

struct SerializeOpts {
    std::string tmpl = "raw";
    std::string preamble;
    std::string row_template;
    int decimals = -1;
};

void add_tokenizer_options(CLI::App* sub, TokenizerOpts& opts) {
    sub->add_option("--vocab", opts.vocab_path, "vocabulary JSON file")->required();
    sub->add_option("--merges", opts.merges_path, "merges text file")->required();
    sub->add_option("--name", opts.name, "tokenizer name used in reports");
    sub->add_option("--utf8", opts.utf8, "decode policy for invalid UTF-8")
        ->check(CLI::IsMember({"error", "replace", "passthrough"}));
    sub->add_flag("--numtok", opts.numtok,
                  "wrap the tokenizer with digit-level numeric remediation");
}

void add_input_options(CLI::App* sub, InputOpts& opts, bool with_wisdm = true) {
    auto* text = sub->add_option("--text", opts.text, "input text");
    auto* use_stdin = sub->add_flag("--stdin", opts.use_stdin, "read input text from stdin");
    text->excludes(use_stdin);
    if (with_wisdm) {
        auto* wisdm =
            sub->add_option("--wisdm", opts.wisdm_path, "raw accelerometer data file to ingest");
        wisdm->excludes(text)->excludes(use_stdin);
    }
}

void add_transform_options(CLI::App* sub, TransformOpts& opts) {
    sub->add_option("--rows", opts.rows, "keep only the first N rows (0 = all)");
    sub->add_option("--downsample", opts.downsample, "keep every k-th row");
    sub->add_option("--window", opts.window, "aggregate rows in windows of this size (0 = off)");
    sub->add_option("--stat", opts.stat, "aggregate statistic")
        ->check(CLI::IsMember({"mean", "min", "max"}));
    sub->add_option("--round", opts.round_decimals,
                    "round x/y/z to this many decimals (half away from zero)");
}

// ---- helpers ----------------------------------------------------------------

std::string read_stdin() {
    return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw tokaudit::ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw tokaudit::ParseError("cannot open output file: " + out_path);
    out << content;
}

std::string default_name(const std::string& vocab_path) {
    std::filesystem::path p(vocab_path);
    std::string stem = p.stem().string();
    if (stem == "vocab" && p.has_parent_path() && p.parent_path().has_filename())
        return p.parent_path().filename().string();
    return stem;
}

tokaudit::Utf8Policy parse_utf8(const std::string& s) {
    if (s == "replace") return tokaudit::Utf8Policy::Replace;
    if (s == "passthrough") return tokaudit::Utf8Policy::Passthrough;
    return tokaudit::Utf8Policy::Error;
}

std::shared_ptr<const Tokenizer> load_tokenizer(const TokenizerOpts& opts) {
    tokaudit::BpeConfig config;
    config.utf8 = parse_utf8(opts.utf8);
    config.name = opts.name.empty() ? default_name(opts.vocab_path) : opts.name;
    auto base = std::make_shared<tokaudit::BpeTokenizer>(
        tokaudit::Vocab::from_json_file(opts.vocab_path),
        tokaudit::MergeTable::from_file(opts.merges_path), std::move(config));
    if (!opts.numtok) return base;
    return std::make_shared<tokaudit::NumericTokenizer>(base);
}

AggregateStat parse_stat(const std::string& s) {
    if (s == "min") return AggregateStat::Min;
    if (s == "max") return AggregateStat::Max;
    return AggregateStat::Mean;
}

std::vector<SensorRow> apply_transforms(std::vector<SensorRow> rows, const TransformOpts& t) {
    if (t.rows > 0 && rows.size() > t.rows) rows.resize(t.rows);
    if (t.downsample > 1) rows = tokaudit::downsample(rows, t.downsample);
    if (t.window > 0) rows = tokaudit::aggregate(rows, t.window, parse_stat(t.stat));
    if (t.round_decimals >= 0) rows = tokaudit::round_values(rows, t.round_decimals);
    return rows;
}

tokaudit::SerializedBatch build_batch(const std::string& wisdm_path, const TransformOpts& t,
                                      const SerializeOpts& s) {
    auto rows = apply_transforms(tokaudit::parse_rows_file(wisdm_path), t);
    tokaudit::SerializeOptions opts;
    opts.tmpl = s.tmpl == "labeled" ? tokaudit::SerializeTemplate::LabeledPrompt
                                    : tokaudit::SerializeTemplate::RawCsv;
    opts.decimals = s.decimals;
    if (!s.preamble.empty()) opts.preamble = s.preamble;
    if (!s.row_template.empty()) opts.row_template = s.row_template;
    return tokaudit::serialize(rows, opts);
}

// Flat-object renderers for profile-style JSON.
std::string json_to_plain(const ordered_json& j) {
    std::string out;
    for (const auto& [key, value] : j.items()) {
        out += key;
        out += ": ";
        out += value.dump();
        out += '\n';
    }
    return out;
}

std::string json_to_markdown(const ordered_json& j) {
    std::string out = "| key | value |\n|---|---|\n";
    for (const auto& [key, value] : j.items()) {
        out += "| " + key + " | `" + value.dump() + "` |\n";
    }
    return out;
}

std::string render_json(const ordered_json& j, const std::string& format) {
    if (format == "plain") return json_to_plain(j);
    if (format == "markdown") return json_to_markdown(j);
    return tokaudit::to_json_text(j);
}

std::string utc_stamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

void add_format_option(CLI::App* sub, std::string& format) {
    sub->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"json", "markdown", "plain"}));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tokaudit: audits byte-level BPE tokenization of numeric and sensor data"};
    app.require_subcommand(1);

    int exit_code = 0;

    // ---- encode -------------------------------------------------------------
    auto* encode = app.add_subcommand("encode", "encode text to token ids");
    TokenizerOpts enc_tok;
    InputOpts enc_in;
    std::string enc_format = "plain";
    add_tokenizer_options(encode, enc_tok);
    add_input_options(encode, enc_in, false);
    add_format_option(encode, enc_format);
    encode->callback([&] {
        auto tok = load_tokenizer(enc_tok);
        std::string text = enc_in.use_stdin ? read_stdin() : enc_in.text;
        tokaudit::Encoding enc = tok->encode(text);
        if (enc_format == "plain") {
            std::string out;
            auto ids = enc.ids();
            for (std::size_t i = 0; i < ids.size(); ++i) {
                if (i) out += ' ';
                out += std::to_string(ids[i]);
            }
            out += '\n';
            std::cout << out;
        } else {
            std::cout << render_json(tokaudit::encoding_to_json(enc, *tok), enc_format);
        }
    });

    // ---- decode -------------------------------------------------------------
    auto* decode = app.add_subcommand("decode", "decode token ids to text");
    TokenizerOpts dec_tok;
    std::vector<tokaudit::TokenId> dec_ids;
    bool dec_stdin = false;
    add_tokenizer_options(decode, dec_tok);
    decode->add_option("ids", dec_ids, "token ids");
    decode->add_flag("--stdin", dec_stdin, "read whitespace-separated ids from stdin");
    decode->callback([&] {
        auto tok = load_tokenizer(dec_tok);
        std::vector<tokaudit::TokenId> ids = dec_ids;
        if (dec_stdin) {
            std::istringstream in(read_stdin());
            tokaudit::TokenId id;
            while (in >> id) ids.push_back(id);
        }
        std::cout << tok->decode(ids);
    });

    // ---- train --------------------------------------------------------------
    auto* train = app.add_subcommand("train", "learn a BPE vocabulary from a corpus");
    InputOpts train_in;
    std::vector<std::string> train_files;
    std::string train_mode = "byte";
    std::size_t train_size = 0;
    std::string out_vocab, out_merges;
    add_input_options(train, train_in, false);
    train->add_option("--input", train_files, "corpus files (one document each)");
    train->add_option("--vocab-size", train_size, "target vocabulary size")->required();
    train->add_option("--mode", train_mode, "symbol mode")
        ->check(CLI::IsMember({"byte", "char"}));
    train->add_option("--out-vocab", out_vocab, "output vocabulary JSON path")->required();
    train->add_option("--out-merges", out_merges, "output merges path")->required();
    train->callback([&] {
        std::vector<std::string> corpus;
        if (!train_in.text.empty()) corpus.push_back(train_in.text);
        if (train_in.use_stdin) corpus.push_back(read_stdin());
        for (const auto& f : train_files) corpus.push_back(read_file(f));
        tokaudit::TrainConfig config;
        config.mode = train_mode == "char" ? tokaudit::TokenizerMode::CharLevel
                                           : tokaudit::TokenizerMode::ByteLevel;
        auto result = tokaudit::train_bpe(corpus, train_size, config);
        write_output(out_vocab, result.vocab.to_json());
        write_output(out_merges, result.merges.to_text());
        std::cerr << "trained " << result.vocab.size() << " tokens, " << result.merges.size()
                  << " merges\n";
    });

    // ---- audit ----------------------------------------------------------------
    auto* audit = app.add_subcommand("audit", "run the pitfall audit on text or sensor data");
    TokenizerOpts audit_tok;
    InputOpts audit_in;
    TransformOpts audit_tr;
    SerializeOpts audit_ser;
    std::string audit_format = "json";
    std::string audit_out;
    bool audit_strict = false;
    bool audit_stamp = false;
    add_tokenizer_options(audit, audit_tok);
    add_input_options(audit, audit_in);
    add_transform_options(audit, audit_tr);
    audit->add_option("--template", audit_ser.tmpl, "serialization template for --wisdm")
        ->check(CLI::IsMember({"raw", "labeled"}));
    audit->add_option("--decimals", audit_ser.decimals,
                      "print x/y/z with this many decimals (-1 = shortest)");
    add_format_option(audit, audit_format);
    audit->add_option("--out", audit_out, "write the report to a file instead of stdout");
    audit->add_flag("--strict", audit_strict, "exit 1 when any finding triggers");
    audit->add_flag("--stamp", audit_stamp, "include a UTC timestamp in the report");
    audit->callback([&] {
        auto tok = load_tokenizer(audit_tok);
        tokaudit::AuditReport report;
        if (!audit_in.wisdm_path.empty()) {
            auto batch = build_batch(audit_in.wisdm_path, audit_tr, audit_ser);
            report = tokaudit::run_audit(*tok, batch.text, batch.field_spans);
        } else {
            std::string text = audit_in.use_stdin ? read_stdin() : audit_in.text;
            report = tokaudit::run_audit(*tok, text);
        }
        std::string rendered;
        if (audit_format == "markdown") rendered = tokaudit::render_markdown(report);
        else if (audit_format == "plain") rendered = tokaudit::render_plain(report);
        else
            rendered = tokaudit::to_json_text(
                tokaudit::report_to_json(report, audit_stamp ? utc_stamp() : ""));
        write_output(audit_out, rendered);
        if (audit_strict && tokaudit::any_triggered(report)) exit_code = 1;
    });

    // ---- compare --------------------------------------------------------------
    auto* compare = app.add_subcommand("compare", "measure divergence between two tokenizers");
    TokenizerOpts cmp_tok;
    InputOpts cmp_in;
    TransformOpts cmp_tr;
    std::string cmp_vocab_b, cmp_merges_b, cmp_name_b;
    bool cmp_numtok_b = false;
    std::string cmp_format = "json";
    add_tokenizer_options(compare, cmp_tok);
    add_input_options(compare, cmp_in);
    add_transform_options(compare, cmp_tr);
    compare->add_option("--vocab-b", cmp_vocab_b, "second tokenizer's vocabulary");
    compare->add_option("--merges-b", cmp_merges_b, "second tokenizer's merges");
    compare->add_option("--name-b", cmp_name_b, "second tokenizer's report name");
    compare->add_flag("--numtok-b", cmp_numtok_b,
                      "compare against the numeric wrapper of the first tokenizer");
    add_format_option(compare, cmp_format);
    compare->callback([&] {
        auto a = load_tokenizer(cmp_tok);
        std::shared_ptr<const Tokenizer> b;
        if (!cmp_vocab_b.empty() || !cmp_merges_b.empty()) {
            if (cmp_vocab_b.empty() || cmp_merges_b.empty())
                throw CLI::ValidationError("--vocab-b and --merges-b must be given together");
            TokenizerOpts opts_b;
            opts_b.vocab_path = cmp_vocab_b;
            opts_b.merges_path = cmp_merges_b;
            opts_b.name = cmp_name_b;
            b = load_tokenizer(opts_b);
        } else if (cmp_numtok_b) {
            b = std::make_shared<tokaudit::NumericTokenizer>(a);
        } else {
            throw CLI::ValidationError("compare needs --vocab-b/--merges-b or --numtok-b");
        }

        std::vector<std::string> corpus;
        if (!cmp_in.wisdm_path.empty()) {
            auto rows = apply_transforms(tokaudit::parse_rows_file(cmp_in.wisdm_path), cmp_tr);
            for (const auto& row : rows)
                corpus.push_back(tokaudit::serialize({row}).text);
        } else {
            std::string text = cmp_in.use_stdin ? read_stdin() : cmp_in.text;
            std::istringstream lines(text);
            std::string line;
            while (std::getline(lines, line))
                if (!line.empty()) corpus.push_back(line);
        }

        auto report = tokaudit::compare_tokenizers(*a, *b, corpus);
        ordered_json j = tokaudit::divergence_to_json(report);
        j["tokenizer_a"] = a->name();
        j["tokenizer_b"] = b->name();
        std::cout << render_json(j, cmp_format);
    });

    // ---- ingest ---------------------------------------------------------------
    auto* ingest = app.add_subcommand("ingest", "parse, transform and serialize sensor data");
    InputOpts ing_in;
    TransformOpts ing_tr;
    SerializeOpts ing_ser;
    std::string ing_out, ing_spans_out;
    ingest->add_option("--wisdm", ing_in.wisdm_path, "raw accelerometer data file")->required();
    add_transform_options(ingest, ing_tr);
    ingest->add_option("--template", ing_ser.tmpl, "serialization template")
        ->check(CLI::IsMember({"raw", "labeled"}));
    ingest->add_option("--preamble", ing_ser.preamble, "preamble for the labeled template");
    ingest->add_option("--row-template", ing_ser.row_template,
                       "row template with {participant} {activity} {timestamp} {x} {y} {z}");
    ingest->add_option("--decimals", ing_ser.decimals,
                       "print x/y/z with this many decimals (-1 = shortest)");
    ingest->add_option("--out", ing_out, "write serialized text here instead of stdout");
    ingest->add_option("--spans-out", ing_spans_out, "write the field-span sidecar JSON here");
    ingest->callback([&] {
        auto batch = build_batch(ing_in.wisdm_path, ing_tr, ing_ser);
        write_output(ing_out, batch.text);
        if (!ing_spans_out.empty())
            write_output(ing_spans_out, tokaudit::field_spans_to_json(batch.field_spans));
    });

    // ---- years ----------------------------------------------------------------
    auto* years = app.add_subcommand("years", "single-token coverage of a year range");
    TokenizerOpts yr_tok;
    int yr_from = 0, yr_to = 0;
    std::string yr_format = "json";
    add_tokenizer_options(years, yr_tok);
    years->add_option("--from", yr_from, "first year")->required();
    years->add_option("--to", yr_to, "last year")->required();
    add_format_option(years, yr_format);
    years->callback([&] {
        auto tok = load_tokenizer(yr_tok);
        auto profile = tokaudit::scan_years(*tok, yr_from, yr_to);
        ordered_json j = tokaudit::profile_to_json(profile);
        j["tokenizer"] = tok->name();
        std::cout << render_json(j, yr_format);
    });

    // ---- ints -----------------------------------------------------------------
    auto* ints = app.add_subcommand("ints", "token chunking profile of an integer range");
    TokenizerOpts int_tok;
    long long int_from = 0, int_to = 0;
    bool int_list = false;
    std::string int_format = "json";
    add_tokenizer_options(ints, int_tok);
    ints->add_option("--from", int_from, "first integer")->required();
    ints->add_option("--to", int_to, "last integer")->required();
    ints->add_flag("--list", int_list, "serialize the range as a comma-space list");
    add_format_option(ints, int_format);
    ints->callback([&] {
        auto tok = load_tokenizer(int_tok);
        auto profile = tokaudit::scan_integers(
            *tok, int_from, int_to,
            int_list ? tokaudit::IntegerFormat::CommaSpaceList : tokaudit::IntegerFormat::Plain);
        ordered_json j = tokaudit::profile_to_json(profile);
        j["tokenizer"] = tok->name();
        std::cout << render_json(j, int_format);
    });

    // ---- dispatch ---------------------------------------------------------------
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion")
            return app.exit(e);
        std::cerr << "tokaudit: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "tokaudit: " << e.what() << "\n";
        return 2;
    }
    return exit_code;
}
