//! Deterministic number formatting and a minimal JSON emitter.
//!
//! JSON numbers carry 17 significant digits (round-trip exact for f64), CSV
//! carries 12. Hand-rolled so repeated runs are byte-identical.

/// 17 significant digits, scientific.
pub fn fmt_g17(x: f64) -> String {
    format!("{x:.16e}")
}

/// 12 significant digits, scientific.
pub fn fmt_g12(x: f64) -> String {
    format!("{x:.11e}")
}

/// Tiny streaming JSON writer; the caller supplies structure, keys in a
/// fixed order, and pre-formatted scalars.
pub struct JsonWriter {
    buf: String,
    need_comma: Vec<bool>,
}

impl JsonWriter {
    pub fn new() -> Self {
        JsonWriter { buf: String::new(), need_comma: vec![false] }
    }

    fn sep(&mut self) {
        if let Some(last) = self.need_comma.last_mut() {
            if *last {
                self.buf.push(',');
            }
            *last = true;
        }
    }

    pub fn open_object(&mut self) {
        self.buf.push('{');
        self.need_comma.push(false);
    }

    pub fn close_object(&mut self) {
        self.buf.push('}');
        self.need_comma.pop();
    }

    pub fn open_array(&mut self) {
        self.buf.push('[');
        self.need_comma.push(false);
    }

    pub fn close_array(&mut self) {
        self.buf.push(']');
        self.need_comma.pop();
    }

    /// Key inside an object; value must follow.
    pub fn key(&mut self, k: &str) {
        self.sep();
        self.buf.push('"');
        self.buf.push_str(k);
        self.buf.push_str("\":");
        if let Some(last) = self.need_comma.last_mut() {
            *last = true;
        }
    }

    /// Separator position for the next array element.
    pub fn array_item(&mut self) {
        self.sep();
        if let Some(last) = self.need_comma.last_mut() {
            *last = true;
        }
    }

    /// Raw pre-formatted JSON fragment (number, bool, null, string).
    pub fn raw(&mut self, s: &str) {
        self.buf.push_str(s);
    }

    pub fn num17(&mut self, x: f64) {
        let s = fmt_g17(x);
        self.buf.push_str(&s);
    }

    pub fn finish(mut self) -> String {
        self.buf.push('\n');
        self.buf
    }
}
