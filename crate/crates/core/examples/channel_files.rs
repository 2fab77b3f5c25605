//! Channel spec documents: emit a built-in, edit it, parse it back.

use twrc::channel::{builtin_channel, emit_channel_spec, parse_channel_spec, ChannelError};

fn main() {
    let spec = builtin_channel("ff-adder-3+noiseless").unwrap();
    let text = emit_channel_spec(&spec);
    println!("{text}");
    assert_eq!(parse_channel_spec(&text).unwrap(), spec);

    let bad = text.replacen("\"name\"", "\"nmae\"", 1);
    match parse_channel_spec(&bad) {
        Err(ChannelError::Parse { line, column, message }) => println!("line {line} col {column}: {message}"),
        other => panic!("{other:?}"),
    }
}
