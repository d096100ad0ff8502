#include "tokaudit/merges.hpp"

#include "tokaudit/errors.hpp"
#include "tokaudit/vocab.hpp"

#include <fstream>
#include <sstream>

namespace tokaudit {

MergeTable MergeTable::from_text(std::string_view text) {
    MergeTable table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos
                                                                               : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line_no == 1 && line.starts_with("#version")) continue;

        std::size_t sp = line.find(' ');
        if (sp == std::string_view::npos || sp == 0 || sp + 1 >= line.size() ||
            line.find(' ', sp + 1) != std::string_view::npos)
            throw ParseError("merges line " + std::to_string(line_no) +
                             ": expected two space-separated symbols, got \"" +
                             std::string(line) + "\"");
        try {
            table.add(std::string(line.substr(0, sp)), std::string(line.substr(sp + 1)));
        } catch (const IntegrityError& e) {
            throw IntegrityError("merges line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return table;
}

MergeTable MergeTable::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open merges file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return from_text(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    } catch (const IntegrityError& e) {
        throw IntegrityError(path + ": " + e.what());
    }
}

std::string MergeTable::to_text() const {
    std::string out = "#version: 0.2\n";
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        const auto& p = pairs_[i];
        for (const std::string* s : {&p.left, &p.right}) {
            if (s->empty() || s->find(' ') != std::string::npos || s->find('\n') != std::string::npos)
                throw IntegrityError("merge " + std::to_string(i) +
                                     ": symbol not representable in the two-column text format");
        }
        out += p.left;
        out += ' ';
        out += p.right;
        out += '\n';
    }
    return out;
}

std::optional<int> MergeTable::rank_of(std::string_view left, std::string_view right) const {
    auto it = rank_.find(std::pair<std::string_view, std::string_view>(left, right));
    if (it == rank_.end()) return std::nullopt;
    return it->second;
}

void MergeTable::add(std::string left, std::string right) {
    if (rank_of(left, right))
        throw IntegrityError("duplicate merge pair \"" + left + "\" + \"" + right + "\"");
    int rank = static_cast<int>(pairs_.size());
    rank_.emplace(std::pair<std::string, std::string>(left, right), rank);
    pairs_.push_back({std::move(left), std::move(right)});
}

void MergeTable::validate_against(const Vocab& vocab) const {
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
        std::string merged = pairs_[i].left + pairs_[i].right;
        if (!vocab.contains(merged))
            throw IntegrityError("merge " + std::to_string(i) + ": result \"" + merged +
                                 "\" is not in the vocabulary");
    }
}

} // namespace tokaudit
