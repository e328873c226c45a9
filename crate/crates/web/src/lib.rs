//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Results cross the boundary as JSON strings; errors as plain strings.

pub mod demo;

use serde::Serialize;
use wasm_bindgen::prelude::*;

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("views serialize")
}

fn js(result: Result<String, String>) -> Result<String, JsValue> {
    result.map_err(|e| JsValue::from_str(&e))
}

/// Vertices, arcs and parameters of an `.rcg` instance, for drawing.
#[wasm_bindgen]
pub fn graph(text: &str) -> Result<String, JsValue> {
    js(demo::graph_view(text).map(|g| json(&g)))
}

/// Solves an `.rcg` instance with `mode` = `memo` or `dfs`.
#[wasm_bindgen]
pub fn solve(text: &str, mode: &str) -> Result<String, JsValue> {
    js(demo::solve(text, mode).map(|r| json(&r)))
}

/// Reduces a QDIMACS formula; `loose` selects the larger budget.
#[wasm_bindgen]
pub fn reduce(text: &str, loose: bool) -> Result<String, JsValue> {
    js(demo::reduce(text, loose).map(|r| json(&r)))
}

#[wasm_bindgen]
pub struct PlaySession(demo::Session);

#[wasm_bindgen]
impl PlaySession {
    #[wasm_bindgen(constructor)]
    pub fn new(text: &str, human_traveler: bool) -> Result<PlaySession, JsValue> {
        demo::Session::new(text, human_traveler).map(PlaySession).map_err(|e| JsValue::from_str(&e))
    }

    pub fn view(&self) -> String {
        json(&self.0.view())
    }

    pub fn announce(&mut self, arcs: Vec<u32>) -> Result<(), JsValue> {
        self.0.announce(&arcs).map_err(|e| JsValue::from_str(&e))
    }

    pub fn take(&mut self, arc: u32) -> Result<(), JsValue> {
        self.0.take(arc).map_err(|e| JsValue::from_str(&e))
    }

    pub fn transcript(&self) -> Result<String, JsValue> {
        js(self.0.transcript())
    }
}
