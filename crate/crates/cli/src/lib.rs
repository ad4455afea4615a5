//! Library surface of the `blockdet` binary: the JSON file formats and
//! output documents, shared with the integration tests.

pub mod io;
