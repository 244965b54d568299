from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from backend.routers import sim
from vpquad.config import APP_VERSION, CORS_ORIGINS

app = FastAPI(
    title="vpquad API",
    description="Backend API for the variable-pitch quadrotor simulator",
    version=APP_VERSION,
)

# CORS (VPQUAD_CORS_ORIGINS, comma separated)
origins = CORS_ORIGINS

app.add_middleware(
    CORSMiddleware,
    allow_origins=origins,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)

# Include Routers
app.include_router(sim.router, prefix="/api/v1/sim", tags=["sim"])


@app.get("/health")
async def health_check():
    return {"status": "ok", "service": "vpquad-api"}
