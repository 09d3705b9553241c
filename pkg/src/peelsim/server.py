"""Websocket + static-asset server wrapping one debug session."""

import os

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import FileResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from starlette.concurrency import run_in_threadpool

from .service import Session, handle_line


def create_app(session: Session = None, frontend_dir: str = None) -> FastAPI:
    app = FastAPI(title="peel debug service")
    state = {"session": session or Session()}

    @app.websocket("/session")
    async def session_socket(websocket: WebSocket):
        await websocket.accept()
        try:
            while True:
                text = await websocket.receive_text()
                # commands may pace (sleep); keep the event loop free
                response, events = await run_in_threadpool(
                    handle_line, state["session"], text)
                # events first: a client that awaits the response then
                # reads its view sees the post-command snapshot
                for event in events:
                    await websocket.send_text(event)
                await websocket.send_text(response)
        except WebSocketDisconnect:
            pass

    if frontend_dir and os.path.isdir(frontend_dir):
        index = os.path.join(frontend_dir, "index.html")

        @app.get("/")
        async def root():
            return FileResponse(index)

        app.mount("/static", StaticFiles(directory=frontend_dir),
                  name="static")
    else:
        @app.get("/")
        async def root_placeholder():
            return PlainTextResponse(
                "peel debug service is running; connect a client to "
                "/session (no frontend assets found)")

    return app


def serve(port: int = 8750, host: str = "127.0.0.1",
          session: Session = None, frontend_dir: str = None):
    import uvicorn

    uvicorn.run(create_app(session, frontend_dir), host=host, port=port,
                log_level="warning")
