#pragma once

#include <condition_variable>
#include <cstdint>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <string>
#include <thread>

#include "walkforge/error.hpp"
#include "walkforge/walker.hpp"

namespace walkforge {

enum class OutputFormat : uint8_t { Text, Binary };

// Text: `query_id<TAB>status<TAB>v0 v1 v2 ...` + LF.
void append_text_record(std::string& buf, const WalkRecord& record);

// Binary: u64 query id, u8 status (0 complete, 1 dead end), u32 path length,
// then the path as u32 vertex ids; little-endian throughout.
void append_binary_record(std::string& buf, const WalkRecord& record);

constexpr size_t kMinOutputBuffer = 1u << 20;

// Walk output with two alternating buffers: one fills while the other flushes
// on a background task, so disk time overlaps record formatting.  Failures
// surface on the next rotation or at finish(), never silently.
class DoubleBufferedWriter {
public:
    DoubleBufferedWriter(const std::string& path, OutputFormat format,
                         size_t buffer_bytes = 4 * kMinOutputBuffer);
    ~DoubleBufferedWriter();

    DoubleBufferedWriter(const DoubleBufferedWriter&) = delete;
    DoubleBufferedWriter& operator=(const DoubleBufferedWriter&) = delete;

    void write(const WalkRecord& record);
    void write_all(const WalkSet& walks);

    // Flushes whatever is buffered and closes the file.  Idempotent; called by
    // the destructor, but call it directly to observe write errors.
    void finish();

private:
    void rotate();

    std::ofstream out_;
    std::string path_;
    OutputFormat format_;
    size_t capacity_;
    std::string buffers_[2];
    int fill_ = 0;
    std::future<void> flushing_;
    bool warned_oversized_ = false;
    bool finished_ = false;
};

// Hands per-worker walk blocks to a single writer in worker order.  Workers
// push exactly one block each; a block beyond the pending cap waits unless it
// is the one the writer needs next, so the drain always progresses no matter
// the completion order.
class OrderedBlockSink {
public:
    OrderedBlockSink(DoubleBufferedWriter& writer, uint32_t workers, uint32_t max_pending = 2);
    ~OrderedBlockSink();

    OrderedBlockSink(const OrderedBlockSink&) = delete;
    OrderedBlockSink& operator=(const OrderedBlockSink&) = delete;

    void push(uint32_t worker, WalkSet&& block);

    // Waits for every worker's block to be written; rethrows writer failures.
    void finish();

    // Releases the drainer when the run failed and some blocks will never
    // arrive; the output file is left partial.
    void cancel();

private:
    void drain();

    DoubleBufferedWriter& writer_;
    uint32_t workers_;
    uint32_t max_pending_;
    std::mutex mutex_;
    std::condition_variable pushed_;
    std::condition_variable drained_;
    std::map<uint32_t, WalkSet> pending_;
    uint32_t next_ = 0;
    bool cancelled_ = false;
    std::exception_ptr error_;
    std::thread drainer_;
};

}  // namespace walkforge
