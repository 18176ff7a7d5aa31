//! C ABI placeholder; filled in after the core stabilises.
