#include "walkforge/output.hpp"

#include <charconv>
#include <cstring>
#include <iostream>

namespace walkforge {

namespace {

void append_number(std::string& buf, uint64_t value) {
    char digits[20];
    auto [end, ec] = std::to_chars(digits, digits + sizeof(digits), value);
    buf.append(digits, end);
}

template <typename T>
void append_raw(std::string& buf, T value) {
    char bytes[sizeof(T)];
    std::memcpy(bytes, &value, sizeof(T));
    buf.append(bytes, sizeof(T));
}

}  // namespace

void append_text_record(std::string& buf, const WalkRecord& record) {
    append_number(buf, record.query_id);
    buf.push_back('\t');
    buf.append(to_string(record.status));
    buf.push_back('\t');
    for (size_t i = 0; i < record.path.size(); ++i) {
        if (i > 0) {
            buf.push_back(' ');
        }
        append_number(buf, record.path[i]);
    }
    buf.push_back('\n');
}

void append_binary_record(std::string& buf, const WalkRecord& record) {
    append_raw<uint64_t>(buf, record.query_id);
    buf.push_back(record.status == WalkStatus::Complete ? '\0' : '\1');
    append_raw<uint32_t>(buf, static_cast<uint32_t>(record.path.size()));
    for (VertexId v : record.path) {
        append_raw<uint32_t>(buf, v);
    }
}

DoubleBufferedWriter::DoubleBufferedWriter(const std::string& path, OutputFormat format,
                                           size_t buffer_bytes)
    : path_(path), format_(format), capacity_(buffer_bytes) {
    if (buffer_bytes < kMinOutputBuffer) {
        throw ConfigError("output buffer must be at least " +
                          std::to_string(kMinOutputBuffer) + " bytes, got " +
                          std::to_string(buffer_bytes));
    }
    out_.open(path, std::ios::binary | std::ios::trunc);
    if (!out_) {
        throw IoError("cannot open output file " + path);
    }
    buffers_[0].reserve(capacity_);
    buffers_[1].reserve(capacity_);
}

DoubleBufferedWriter::~DoubleBufferedWriter() {
    try {
        finish();
    } catch (...) {
        // Destructor swallows; call finish() directly to observe failures.
    }
}

void DoubleBufferedWriter::write(const WalkRecord& record) {
    std::string& buf = buffers_[fill_];
    size_t before = buf.size();
    if (format_ == OutputFormat::Text) {
        append_text_record(buf, record);
    } else {
        append_binary_record(buf, record);
    }
    if (before == 0 && buf.size() > capacity_ && !warned_oversized_) {
        std::cerr << "walkforge: warning: a single record (" << buf.size()
                  << " bytes) exceeds the output buffer (" << capacity_
                  << " bytes); buffer grown\n";
        warned_oversized_ = true;
    }
    if (buf.size() >= capacity_) {
        rotate();
    }
}

void DoubleBufferedWriter::write_all(const WalkSet& walks) {
    for (const WalkRecord& record : walks) {
        write(record);
    }
}

void DoubleBufferedWriter::rotate() {
    if (flushing_.valid()) {
        flushing_.get();  // rethrows a failed previous flush
    }
    std::string& full = buffers_[fill_];
    flushing_ = std::async(std::launch::async, [this, &full] {
        out_.write(full.data(), static_cast<std::streamsize>(full.size()));
        if (!out_) {
            throw IoError("write to " + path_ + " failed");
        }
        full.clear();
    });
    fill_ = 1 - fill_;
}

void DoubleBufferedWriter::finish() {
    if (finished_) {
        return;
    }
    finished_ = true;
    if (flushing_.valid()) {
        flushing_.get();
    }
    std::string& buf = buffers_[fill_];
    if (!buf.empty()) {
        out_.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        buf.clear();
    }
    out_.flush();
    out_.close();
    if (!out_) {
        throw IoError("write to " + path_ + " failed");
    }
}

OrderedBlockSink::OrderedBlockSink(DoubleBufferedWriter& writer, uint32_t workers,
                                   uint32_t max_pending)
    : writer_(writer), workers_(workers), max_pending_(std::max<uint32_t>(1, max_pending)) {
    drainer_ = std::thread([this] { drain(); });
}

OrderedBlockSink::~OrderedBlockSink() {
    if (drainer_.joinable()) {
        drainer_.join();
    }
}

void OrderedBlockSink::push(uint32_t worker, WalkSet&& block) {
    std::unique_lock lock(mutex_);
    drained_.wait(lock, [&] {
        return error_ || cancelled_ || worker == next_ || pending_.size() < max_pending_;
    });
    if (error_ || cancelled_) {
        return;  // drain stopped; finish() reports any writer failure
    }
    pending_.emplace(worker, std::move(block));
    pushed_.notify_one();
}

void OrderedBlockSink::drain() {
    try {
        for (uint32_t worker = 0; worker < workers_; ++worker) {
            WalkSet block;
            {
                std::unique_lock lock(mutex_);
                pushed_.wait(lock, [&] { return cancelled_ || pending_.contains(worker); });
                if (cancelled_) {
                    return;
                }
                block = std::move(pending_.at(worker));
                pending_.erase(worker);
                next_ = worker + 1;
                drained_.notify_all();
            }
            writer_.write_all(block);
        }
    } catch (...) {
        std::lock_guard lock(mutex_);
        error_ = std::current_exception();
        drained_.notify_all();
    }
}

void OrderedBlockSink::finish() {
    if (drainer_.joinable()) {
        drainer_.join();
    }
    if (error_) {
        std::rethrow_exception(error_);
    }
}

void OrderedBlockSink::cancel() {
    {
        std::lock_guard lock(mutex_);
        cancelled_ = true;
    }
    pushed_.notify_all();
    drained_.notify_all();
    if (drainer_.joinable()) {
        drainer_.join();
    }
}

}  // namespace walkforge
