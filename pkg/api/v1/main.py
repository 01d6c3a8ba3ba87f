from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from api.v1.routes import bounds, runs

app = FastAPI(title="qisim")

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(runs.router)
app.include_router(bounds.router)
