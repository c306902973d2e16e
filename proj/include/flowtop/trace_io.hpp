#pragma once

#include <cstdint>
#include <fstream>
#include <istream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flowtop/flow_id.hpp"

namespace flowtop {

// Input-file problems: missing files, corrupt headers, malformed records.
struct trace_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- flowlog: one comma-separated 5-tuple per line, '#' starts a comment ---

class flowlog_reader {
public:
    explicit flowlog_reader(const std::string& path)
        : owned_(std::make_unique<std::ifstream>(path)), in_(owned_.get()), name_(path) {
        if (!*owned_) throw trace_error("cannot open flowlog: " + path);
    }
    explicit flowlog_reader(std::istream& in, std::string name = "<stream>")
        : in_(&in), name_(std::move(name)) {}

    std::optional<flow_id> next() {
        std::string line;
        while (std::getline(*in_, line)) {
            ++line_no_;
            const std::string_view sv = trimmed(line);
            if (sv.empty() || sv.front() == '#') continue;
            return parse_line(sv);
        }
        return std::nullopt;
    }

    uint64_t line_number() const { return line_no_; }

private:
    flow_id parse_line(std::string_view sv) const {
        std::string_view fields[5];
        size_t n = 0;
        bool trailing = false;
        while (n < 5) {
            const size_t comma = sv.find(',');
            fields[n++] = sv.substr(0, comma);
            if (comma == std::string_view::npos) {
                trailing = false;
                break;
            }
            sv.remove_prefix(comma + 1);
            trailing = true;
        }
        if (n != 5 || trailing) return fail("expected 5 comma-separated fields");

        flow_id f;
        auto src = parse_ipv4(strip(fields[0]));
        auto dst = parse_ipv4(strip(fields[1]));
        if (!src || !dst) return fail("bad IPv4 address");
        f.src_ip = *src;
        f.dst_ip = *dst;
        auto sp = parse_int(strip(fields[2]), 65535);
        auto dp = parse_int(strip(fields[3]), 65535);
        auto proto = parse_int(strip(fields[4]), 255);
        if (!sp || !dp || !proto) return fail("bad port or protocol value");
        f.src_port = uint16_t(*sp);
        f.dst_port = uint16_t(*dp);
        f.protocol = uint8_t(*proto);
        return f;
    }

    flow_id fail(const char* what) const {
        throw trace_error(name_ + ":" + std::to_string(line_no_) + ": " + what);
    }

    static std::optional<unsigned> parse_int(std::string_view sv, unsigned max) {
        if (sv.empty() || sv.size() > 5) return std::nullopt;
        unsigned v = 0;
        for (char c : sv) {
            if (c < '0' || c > '9') return std::nullopt;
            v = v * 10 + unsigned(c - '0');
        }
        return v <= max ? std::optional<unsigned>(v) : std::nullopt;
    }

    static std::string_view trimmed(std::string_view sv) {
        while (!sv.empty() && (sv.back() == '\r' || sv.back() == ' ' || sv.back() == '\t'))
            sv.remove_suffix(1);
        while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
        return sv;
    }
    static std::string_view strip(std::string_view sv) { return trimmed(sv); }

    std::unique_ptr<std::ifstream> owned_;
    std::istream* in_;
    std::string name_;
    uint64_t line_no_ = 0;
};

inline std::vector<flow_id> read_flowlog(const std::string& path) {
    flowlog_reader reader(path);
    std::vector<flow_id> out;
    while (auto f = reader.next()) out.push_back(*f);
    return out;
}

class flowlog_writer {
public:
    explicit flowlog_writer(const std::string& path) : out_(path) {
        if (!out_) throw trace_error("cannot open flowlog for writing: " + path);
    }

    void comment(const std::string& text) { out_ << "# " << text << '\n'; }
    void write(const flow_id& f) { out_ << to_string(f) << '\n'; }

    template <typename Source>
    uint64_t write_all(Source&& source) {
        uint64_t n = 0;
        while (auto f = source.next()) {
            write(*f);
            ++n;
        }
        return n;
    }

private:
    std::ofstream out_;
};

// --- classic pcap, Ethernet link type only ---

// Yields one flow per IPv4 TCP/UDP packet. Everything else is skipped and
// counted: non-IPv4 frames, non-first fragments (their ports are gone), and
// captures too short to carry the headers. Other IPv4 protocols are skipped
// too unless keep_other_protocols is set, which admits them with ports 0.
class pcap_reader {
public:
    explicit pcap_reader(const std::string& path, bool keep_other_protocols = false)
        : in_(path, std::ios::binary), name_(path), keep_other_(keep_other_protocols) {
        if (!in_) throw trace_error("cannot open pcap: " + path);
        uint8_t header[24];
        in_.read(reinterpret_cast<char*>(header), 24);
        if (in_.gcount() != 24) throw trace_error(name_ + ": truncated pcap global header");
        const uint32_t magic = uint32_t(header[0]) | uint32_t(header[1]) << 8 |
                               uint32_t(header[2]) << 16 | uint32_t(header[3]) << 24;
        if (magic == 0xa1b2c3d4u)
            swapped_ = false;
        else if (magic == 0xd4c3b2a1u)
            swapped_ = true;
        else
            throw trace_error(name_ + ": not a classic pcap file");
        const uint32_t linktype = read_u32(header + 20);
        if (linktype != 1)
            throw trace_error(name_ + ": unsupported link type " + std::to_string(linktype) +
                              " (only Ethernet is handled)");
    }

    std::optional<flow_id> next() {
        uint8_t rec[16];
        for (;;) {
            in_.read(reinterpret_cast<char*>(rec), 16);
            if (in_.gcount() == 0) return std::nullopt;
            if (in_.gcount() != 16) throw trace_error(name_ + ": truncated packet record header");
            const uint32_t incl_len = read_u32(rec + 8);
            if (incl_len > 0x0fffffffu) throw trace_error(name_ + ": corrupt packet length");
            packet_.resize(incl_len);
            in_.read(reinterpret_cast<char*>(packet_.data()), std::streamsize(incl_len));
            if (uint32_t(in_.gcount()) != incl_len)
                throw trace_error(name_ + ": truncated packet record");
            if (auto f = decode(packet_)) return f;
            ++skipped_;
        }
    }

    uint64_t skipped() const { return skipped_; }

private:
    std::optional<flow_id> decode(const std::vector<uint8_t>& pkt) const {
        if (pkt.size() < 14 + 20) return std::nullopt; // Ethernet + minimal IPv4
        const uint16_t ethertype = uint16_t(pkt[12]) << 8 | pkt[13];
        if (ethertype != 0x0800) return std::nullopt;

        const uint8_t* ip = pkt.data() + 14;
        const size_t ip_avail = pkt.size() - 14;
        if ((ip[0] >> 4) != 4) return std::nullopt;
        const size_t ihl = size_t(ip[0] & 0x0f) * 4;
        if (ihl < 20 || ip_avail < ihl) return std::nullopt;

        flow_id f;
        f.src_ip = uint32_t(ip[12]) << 24 | uint32_t(ip[13]) << 16 | uint32_t(ip[14]) << 8 | ip[15];
        f.dst_ip = uint32_t(ip[16]) << 24 | uint32_t(ip[17]) << 16 | uint32_t(ip[18]) << 8 | ip[19];
        f.protocol = ip[9];

        const uint16_t frag = uint16_t(ip[6]) << 8 | ip[7];
        const bool first_fragment = (frag & 0x1fff) == 0;

        if (f.protocol == 6 || f.protocol == 17) {
            if (!first_fragment) return std::nullopt; // ports live in the first fragment
            if (ip_avail < ihl + 4) return std::nullopt;
            const uint8_t* l4 = ip + ihl;
            f.src_port = uint16_t(uint16_t(l4[0]) << 8 | l4[1]);
            f.dst_port = uint16_t(uint16_t(l4[2]) << 8 | l4[3]);
            return f;
        }
        if (keep_other_) return f; // ports stay 0
        return std::nullopt;
    }

    uint32_t read_u32(const uint8_t* p) const {
        return swapped_ ? uint32_t(p[3]) | uint32_t(p[2]) << 8 | uint32_t(p[1]) << 16 |
                              uint32_t(p[0]) << 24
                        : uint32_t(p[0]) | uint32_t(p[1]) << 8 | uint32_t(p[2]) << 16 |
                              uint32_t(p[3]) << 24;
    }

    std::ifstream in_;
    std::string name_;
    bool keep_other_;
    bool swapped_ = false;
    uint64_t skipped_ = 0;
    std::vector<uint8_t> packet_;
};

// In-memory source over a materialized stream.
class vector_source {
public:
    explicit vector_source(const std::vector<flow_id>& flows) : flows_(&flows) {}

    std::optional<flow_id> next() {
        if (pos_ == flows_->size()) return std::nullopt;
        return (*flows_)[pos_++];
    }

private:
    const std::vector<flow_id>* flows_;
    size_t pos_ = 0;
};

// Wrapper that counts how many records the wrapped source yielded.
template <typename Source>
class counting_source {
public:
    explicit counting_source(Source& source) : source_(&source) {}

    std::optional<flow_id> next() {
        auto f = source_->next();
        if (f) ++count_;
        return f;
    }

    uint64_t count() const { return count_; }

private:
    Source* source_;
    uint64_t count_ = 0;
};

} // namespace flowtop
